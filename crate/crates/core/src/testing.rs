//! Deterministic random-instance generators for verification suites.
//!
//! Everything is seeded explicitly so golden values and acceptance runs are
//! reproducible bit for bit.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::kraus::KrausSet;
use crate::operator::Operator;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit_interval(rng: &mut TestRng) -> f64 {
    rng.random_range(-1.0..1.0)
}

/// Dense matrix with entries uniform in the complex unit square.
pub fn random_operator(rng: &mut TestRng, rows: usize, cols: usize) -> Operator {
    let entries = (0..rows * cols)
        .map(|_| Complex64::new(unit_interval(rng), unit_interval(rng)))
        .collect();
    Operator::from_vec(rows, cols, entries).expect("finite entries")
}

pub fn random_hermitian(rng: &mut TestRng, dim: usize) -> Operator {
    let g = random_operator(rng, dim, dim);
    g.add(&g.adjoint()).scaled(Complex64::new(0.5, 0.0))
}

/// Hermitian PSD matrix G*G.
pub fn random_psd(rng: &mut TestRng, dim: usize) -> Operator {
    let g = random_operator(rng, dim, dim);
    g.adjoint().dot(&g)
}

/// Haar-ish unitary from modified Gram-Schmidt on a random matrix.
pub fn random_unitary(rng: &mut TestRng, dim: usize) -> Operator {
    random_isometry(rng, dim, dim)
}

/// Matrix with `cols` orthonormal columns in dimension `rows` (rows ≥ cols).
pub fn random_isometry(rng: &mut TestRng, rows: usize, cols: usize) -> Operator {
    assert!(rows >= cols, "an isometry needs rows >= cols");
    loop {
        let g = random_operator(rng, rows, cols);
        let mut cols_data: Vec<Vec<Complex64>> = (0..cols).map(|j| g.column(j)).collect();
        let mut ok = true;
        for j in 0..cols {
            for k in 0..j {
                let overlap: Complex64 = cols_data[k]
                    .iter()
                    .zip(cols_data[j].iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let prev = cols_data[k].clone();
                for (w, p) in cols_data[j].iter_mut().zip(prev.iter()) {
                    *w -= overlap * p;
                }
            }
            let norm = cols_data[j]
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt();
            if norm < 1e-6 {
                ok = false;
                break;
            }
            for w in cols_data[j].iter_mut() {
                *w /= norm;
            }
        }
        if !ok {
            continue;
        }
        let mut flat = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for col in cols_data.iter() {
                flat.push(col[r]);
            }
        }
        return Operator::from_vec(rows, cols, flat).expect("finite entries");
    }
}

/// Kraus family of `count` random operators, scaled so the map stays O(1).
pub fn random_kraus_set(rng: &mut TestRng, dim: usize, count: usize) -> KrausSet {
    let scale = Complex64::new(1.0 / (count.max(1) as f64).sqrt(), 0.0);
    let ops = (0..count)
        .map(|_| random_operator(rng, dim, dim).scaled(scale))
        .collect::<Vec<_>>();
    if ops.is_empty() {
        KrausSet::empty(dim, dim)
    } else {
        KrausSet::new(ops).expect("equal shapes")
    }
}

/// Random CPTP Kraus family: an isometry from H to H ⊗ C^count, sliced.
pub fn random_cptp_kraus_set(rng: &mut TestRng, dim: usize, count: usize) -> KrausSet {
    let iso = random_isometry(rng, dim * count, dim);
    let ops = (0..count)
        .map(|b| {
            let mut flat = Vec::with_capacity(dim * dim);
            for r in 0..dim {
                for c in 0..dim {
                    flat.push(iso.get(b * dim + r, c));
                }
            }
            Operator::from_vec(dim, dim, flat).expect("finite entries")
        })
        .collect::<Vec<_>>();
    KrausSet::new(ops).expect("equal shapes")
}

/// Operator with the given singular values (useful for decay profiles).
pub fn operator_with_singular_values(rng: &mut TestRng, dim: usize, values: &[f64]) -> Operator {
    assert_eq!(values.len(), dim);
    let u = random_unitary(rng, dim);
    let v = random_unitary(rng, dim);
    let s = Operator::from_diag(
        &values
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect::<Vec<_>>(),
    );
    u.dot(&s).dot(&v.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut r = rng(7);
        for d in [1, 2, 5] {
            let u = random_unitary(&mut r, d);
            assert!(u.orthonormality_defect() < 1e-12);
        }
    }

    #[test]
    fn cptp_kraus_sums_to_identity() {
        let mut r = rng(11);
        let ks = random_cptp_kraus_set(&mut r, 3, 2);
        assert!(ks.gram_sum().max_abs_diff(&Operator::identity(3)) < 1e-12);
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let a = random_operator(&mut rng(42), 3, 3);
        let b = random_operator(&mut rng(42), 3, 3);
        assert!(a.max_abs_diff(&b) == 0.0);
    }
}
