//! Seeded generators for test and benchmark inputs.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HodgeError, Result};
use crate::height::Orientation;
use crate::linalg::{q, CMat, QMat};
use crate::mhs::{HodgeFiltration, WeightFiltration};
use crate::real::{cx, cxf, Real};
use crate::variations::{GammaTerm, LocalVariation};

fn small_int(rng: &mut impl Rng) -> i64 {
    loop {
        let v = rng.random_range(-3..=3);
        if v != 0 {
            return v;
        }
    }
}

/// A Hodge–Tate local variation with graded ranks `[1, 1]` (weights 0, -2)
/// or `[1, m, 1]` (weights 0, -2, -4), `nil_count` commuting nilpotents and
/// `Γ(s) = s_1⋯s_k · G`.
///
/// `N_j` sends the top generator to `a_j` and the middle to `⟨S a_j, ·⟩`
/// times the bottom, with `S` rational symmetric; this makes the `N_j`
/// commute with each other and with `δ_∞`, which has the same shape.
pub fn random_hodge_tate<R: Real>(ranks: &[usize], nil_count: usize, seed: u64, tol: f64) -> Result<LocalVariation<R>> {
    let m = match ranks {
        [1, 1] => 0,
        [1, m, 1] if *m >= 1 => *m,
        _ => return Err(HodgeError::InvalidSpec(format!("unsupported graded ranks {ranks:?}"))),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = m + 2;
    let bottom = dim - 1;
    let weights: Vec<i32> = std::iter::once(0).chain(std::iter::repeat_n(-2, m)).chain([-2 * ranks.len() as i32 + 2]).collect();
    let levels: Vec<i32> = weights.iter().map(|w| w / 2).collect();

    let mut s = vec![vec![0i64; m]; m];
    for i in 0..m {
        for j in i..m {
            let v = rng.random_range(-2..=2);
            s[i][j] = v;
            s[j][i] = v;
        }
    }
    let sym = |v: &[i64]| -> Vec<i64> { (0..m).map(|i| (0..m).map(|k| s[i][k] * v[k]).sum()).collect() };

    let mut nilpotents = Vec::with_capacity(nil_count);
    for _ in 0..nil_count {
        let mut n = QMat::zeros(dim, dim);
        if m == 0 {
            n[(bottom, 0)] = q(small_int(&mut rng));
        } else {
            let a: Vec<i64> = (0..m).map(|_| small_int(&mut rng)).collect();
            let sa = sym(&a);
            for i in 0..m {
                n[(i + 1, 0)] = q(a[i]);
                n[(bottom, i + 1)] = q(sa[i]);
            }
        }
        nilpotents.push(n);
    }

    let mut delta = CMat::<R>::zeros(dim, dim);
    let d1: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
    for i in 0..m {
        delta[(i + 1, 0)] = cxf(d1[i], 0.0);
        let sd: f64 = (0..m).map(|k| s[i][k] as f64 * d1[k]).sum();
        delta[(bottom, i + 1)] = cxf(sd, 0.0);
    }
    delta[(bottom, 0)] = cxf(rng.random_range(-1.0..1.0), 0.0);
    let rot = delta.scale(&cxf(0.0, 1.0)).exp_nilpotent();
    let rot_inv = delta.scale(&cxf(0.0, -1.0)).exp_nilpotent();
    let f0 = HodgeFiltration::from_frame(&CMat::identity(dim), &levels, tol);
    let f_inf = f0.transform(&rot, tol);

    let mut gamma = Vec::new();
    if nil_count > 0 {
        let mut g0 = CMat::<R>::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                if weights[r] < weights[c] {
                    g0[(r, c)] = cxf(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                }
            }
        }
        let g = &(&rot * &g0) * &rot_inv;
        gamma.push(GammaTerm { exponents: vec![1; nil_count], matrix: g });
    }
    LocalVariation::new(
        WeightFiltration::from_coordinate_weights(&weights),
        f_inf,
        nilpotents,
        gamma,
        Orientation::coordinate(dim, 0, bottom),
        tol,
    )
}

/// An admissible `(W, N, Y)` with known `Y'`, built from `sl_2` data and
/// conjugated by a random rational unipotent that preserves `W`.
#[derive(Clone, Debug)]
pub struct RandomDeligneSystem {
    pub w: WeightFiltration,
    pub n: QMat,
    pub y: QMat,
    pub y_prime: QMat,
    /// The relative weight filtration graded by `y`.
    pub m: WeightFiltration,
}

/// Blocks are strings `e_0 → e_1 → …` of `N₀` inside each graded piece of
/// `W`; the lower parts `N_{-j}` are drawn from the `ad N₀⁺`-kernel, so the
/// result is a Deligne system by construction.
pub fn random_deligne_system(rng: &mut impl Rng, max_dim: usize) -> RandomDeligneSystem {
    // (W weight, H weight, block id, position)
    let mut coords: Vec<(i32, i32, usize, usize)> = Vec::new();
    let levels = rng.random_range(1..=3);
    let mut k = rng.random_range(-1..=1);
    let mut block = 0;
    for _ in 0..levels {
        for _ in 0..rng.random_range(1..=2) {
            let size = rng.random_range(1..=3usize);
            if coords.len() + size > max_dim.max(1) {
                break;
            }
            for t in 0..size {
                coords.push((k, size as i32 - 1 - 2 * t as i32, block, t));
            }
            block += 1;
        }
        k -= rng.random_range(1..=2);
    }
    if coords.is_empty() {
        coords.push((0, 0, 0, 0));
    }
    let dim = coords.len();
    let yp: Vec<i32> = coords.iter().map(|c| c.0).collect();
    let yy: Vec<i32> = coords.iter().map(|c| c.0 + c.1).collect();
    let mut n = QMat::zeros(dim, dim);
    let mut n0_plus = QMat::zeros(dim, dim);
    for (a, ca) in coords.iter().enumerate() {
        for (b, cb) in coords.iter().enumerate() {
            if ca.2 == cb.2 && ca.3 == cb.3 + 1 {
                n[(a, b)] = q(1);
            }
            if ca.2 == cb.2 && ca.3 + 1 == cb.3 {
                let size = (ca.1 + 1 + 2 * ca.3 as i32) as i64;
                let t = cb.3 as i64;
                n0_plus[(a, b)] = q(t * (size - t));
            }
        }
    }
    let depth = yp.iter().max().unwrap() - yp.iter().min().unwrap();
    for j in 2..=depth {
        let slots: Vec<(usize, usize)> = (0..dim)
            .flat_map(|a| (0..dim).map(move |b| (a, b)))
            .filter(|&(a, b)| yp[a] - yp[b] == -j && yy[a] - yy[b] == -2)
            .collect();
        if slots.is_empty() {
            continue;
        }
        let columns: Vec<Vec<BigRational>> = slots
            .iter()
            .map(|&(a, b)| {
                let mut e = QMat::zeros(dim, dim);
                e[(a, b)] = q(1);
                n0_plus.commutator(&e).rows_vec().concat()
            })
            .collect();
        let constraint = QMat::from_columns(&columns, dim * dim);
        let kernel = constraint.kernel(0.0);
        for r in 0..kernel.nrows() {
            let c = q(rng.random_range(-2..=2));
            for (i, &(a, b)) in slots.iter().enumerate() {
                n[(a, b)] = &n[(a, b)] + &(&c * &kernel[(r, i)]);
            }
        }
    }
    let mut g = QMat::identity(dim);
    for a in 0..dim {
        for b in 0..dim {
            if yp[a] < yp[b] && rng.random_bool(0.5) {
                g[(a, b)] = q(rng.random_range(-1..=1));
            }
        }
    }
    let g_inv = g.inverse().expect("unipotent");
    let conj = |x: &QMat| &(&g * x) * &g_inv;
    let diag = |d: &[i32]| QMat::diagonal(&d.iter().map(|&v| q(v as i64)).collect::<Vec<_>>());
    let y = conj(&diag(&yy));
    let y_prime = conj(&diag(&yp));
    let generators: Vec<(Vec<BigRational>, i32)> = (0..dim).map(|i| (g.column(i), yy[i])).collect();
    RandomDeligneSystem {
        w: WeightFiltration::from_coordinate_weights(&yp),
        n: conj(&n),
        y,
        y_prime,
        m: WeightFiltration::from_generators(dim, &generators),
    }
}

/// Random complex matrix with entries in the unit square, for benchmarks.
pub fn random_complex<R: Real>(rng: &mut impl Rng, n: usize) -> CMat<R> {
    CMat::from_fn(n, n, |_, _| cx(R::from_f64(rng.random_range(-1.0..1.0)), R::from_f64(rng.random_range(-1.0..1.0))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::{deligne_system_grading, relative_weight_filtration};

    #[test]
    fn deligne_systems_are_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let s = random_deligne_system(&mut rng, 7);
            assert_eq!(relative_weight_filtration(&s.n, &s.w).unwrap(), s.m);
            let got = deligne_system_grading::<f64>(&s.w, &s.n, &s.y.to_complex(), 1e-9).unwrap();
            assert!(got.y_prime.max_abs_diff(&s.y_prime.to_complex()) < 1e-9);
        }
    }

    #[test]
    fn unsupported_ranks_are_rejected() {
        assert!(random_hodge_tate::<f64>(&[2, 1], 1, 0, 1e-9).is_err());
    }
}
