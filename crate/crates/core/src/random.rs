//! Seeded random instances for tests and benchmarks: Ginibre matrices,
//! unitaries, isometries, states, channels, and code subspaces. Everything
//! is driven by a caller-supplied generator, so fixed seeds give fixed
//! corpora.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channel::QuantumChannel;
use crate::densemath::{eig_hermitian, inner, ComplexMatrix};
use crate::qstate::{CodeSubspace, DensityOperator};

/// Matrix with independent standard complex Gaussian entries.
pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Uniformly random normalized vector.
pub fn random_unit_vector(rng: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
    v
}

/// Random isometry (rows ≥ cols) by re-orthogonalized Gram-Schmidt on a
/// Ginibre matrix.
pub fn random_isometry(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols, "an isometry needs rows >= cols");
    let g = ginibre(rng, rows, cols);
    let mut columns: Vec<Vec<Complex64>> = (0..cols).map(|j| g.column(j)).collect();
    for j in 0..cols {
        for _pass in 0..2 {
            for i in 0..j {
                let overlap = inner(&columns[i], &columns[j]);
                let prev = columns[i].clone();
                for (z, p) in columns[j].iter_mut().zip(&prev) {
                    *z -= overlap * p;
                }
            }
        }
        let norm = columns[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in columns[j].iter_mut() {
            *z /= norm;
        }
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| columns[j][i])
}

pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    random_isometry(rng, dim, dim)
}

/// Full-rank random state G G† / Tr.
pub fn random_density(rng: &mut impl Rng, dim: usize) -> DensityOperator {
    random_density_rank(rng, dim, dim)
}

/// Random state of the given rank.
pub fn random_density_rank(rng: &mut impl Rng, dim: usize, rank: usize) -> DensityOperator {
    let g = ginibre(rng, dim, rank);
    let m = &g * &g.adjoint();
    let trace = m.trace().re;
    DensityOperator::new(m.scale_re(1.0 / trace))
        .expect("a normalized Gram matrix is a valid state")
}

/// Random channel with the given Kraus rank, carved out of a random
/// Stinespring isometry.
pub fn random_channel(
    rng: &mut impl Rng,
    in_dim: usize,
    out_dim: usize,
    kraus_rank: usize,
) -> QuantumChannel {
    assert!(
        out_dim * kraus_rank >= in_dim,
        "no isometry into out_dim * kraus_rank < in_dim"
    );
    let v = random_isometry(rng, out_dim * kraus_rank, in_dim);
    let kraus: Vec<ComplexMatrix> = (0..kraus_rank)
        .map(|k| {
            ComplexMatrix::from_fn(out_dim, in_dim, |b, a| v.get(b * kraus_rank + k, a))
        })
        .collect();
    QuantumChannel::from_kraus(kraus).expect("slices of an isometry are trace preserving")
}

pub fn random_code(rng: &mut impl Rng, ambient_dim: usize, logical_dim: usize) -> CodeSubspace {
    CodeSubspace::new(random_isometry(rng, ambient_dim, logical_dim))
        .expect("a random isometry is a valid code")
}

/// Random weights summing to one.
fn random_weights(rng: &mut impl Rng, count: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..count)
        .map(|_| {
            let x: f64 = rng.sample(StandardNormal);
            x * x + 0.1
        })
        .collect();
    let total: f64 = w.iter().sum();
    for x in w.iter_mut() {
        *x /= total;
    }
    w
}

/// Random channel that is perfectly correctable on `code`: each branch maps
/// the code isometrically into one of several mutually orthogonal sectors of
/// the output, and the orthocomplement of the code is routed somewhere
/// harmless.
pub fn random_correctable_channel(
    rng: &mut impl Rng,
    code: &CodeSubspace,
    out_dim: usize,
    branches: usize,
) -> QuantumChannel {
    let k = code.logical_dim();
    let d = code.ambient_dim();
    assert!(
        out_dim >= branches * k,
        "need out_dim >= branches * logical_dim for orthogonal sectors"
    );
    let sectors = random_isometry(rng, out_dim, branches * k);
    let weights = random_weights(rng, branches);
    let vdag = code.isometry().adjoint();

    let mut kraus = Vec::new();
    for (j, w) in weights.iter().enumerate() {
        let wj = ComplexMatrix::from_fn(out_dim, k, |r, c| sectors.get(r, j * k + c));
        kraus.push((&wj * &vdag).scale_re(w.sqrt()));
    }

    // Route the orthocomplement of the code onto a fixed output vector so
    // the whole map is trace preserving; these extra operators annihilate
    // the code and cannot disturb correctability.
    let projector_eig =
        eig_hermitian(&code.projector()).expect("projectors are Hermitian");
    let target = sectors.column(0);
    for i in 0..d {
        if projector_eig.eigenvalues[i] > 0.5 {
            continue;
        }
        let q = projector_eig.eigenvectors.column(i);
        kraus.push(ComplexMatrix::outer(&target, &q));
    }
    QuantumChannel::from_kraus(kraus).expect("sector construction is trace preserving")
}

/// Replaces the cached Kraus set by an equivalent one mixed through a random
/// unitary; the channel itself is unchanged.
pub fn remix_kraus(rng: &mut impl Rng, ch: &QuantumChannel) -> QuantumChannel {
    let r = ch.env_dim();
    let u = random_unitary(rng, r);
    let kraus: Vec<ComplexMatrix> = (0..r)
        .map(|j| {
            let mut f = ComplexMatrix::zeros(ch.out_dim(), ch.in_dim());
            for (k, e) in ch.kraus().iter().enumerate() {
                f = &f + &e.scale(u.get(j, k));
            }
            f
        })
        .collect();
    QuantumChannel::from_kraus(kraus).expect("unitary remixing preserves trace preservation")
}
