//! Index maps and the averaging fold of vectors and matrices.

use num_traits::Zero;

use crate::error::{contract, Result};
use crate::exactlin::rational::int;
use crate::exactlin::{RatMatrix, Rational};

/// A surjection `σ: V → [k]` given as class labels `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMap {
    sigma: Vec<usize>,
    sizes: Vec<usize>,
}

impl IndexMap {
    pub fn new(sigma: Vec<usize>) -> Result<Self> {
        let k = sigma.iter().map(|&i| i + 1).max().unwrap_or(0);
        let mut sizes = vec![0; k];
        for &i in &sigma {
            sizes[i] += 1;
        }
        if sizes.contains(&0) {
            return contract("index map must be surjective onto 0..k");
        }
        Ok(IndexMap { sigma, sizes })
    }

    /// Every element in one class.
    pub fn trivial(n: usize) -> Self {
        Self::new(vec![0; n]).expect("surjective")
    }

    pub fn identity(n: usize) -> Self {
        Self::new((0..n).collect()).expect("surjective")
    }

    pub fn source_len(&self) -> usize {
        self.sigma.len()
    }

    pub fn classes(&self) -> usize {
        self.sizes.len()
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.sigma[v]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn is_injective(&self) -> bool {
        self.sizes.iter().all(|&s| s == 1)
    }

    /// `x` is constant on every class.
    pub fn agrees(&self, x: &[Rational]) -> bool {
        let mut rep: Vec<Option<&Rational>> = vec![None; self.classes()];
        x.iter().zip(&self.sigma).all(|(xv, &i)| match rep[i] {
            None => {
                rep[i] = Some(xv);
                true
            }
            Some(r) => r == xv,
        })
    }

    /// The coarsest common refinement of `σ` and the level sets of `x`;
    /// `None` when `x` already agrees. Classes are numbered by first member.
    pub fn refine(&self, x: &[Rational]) -> Option<IndexMap> {
        if self.agrees(x) {
            return None;
        }
        let mut keys: Vec<(usize, &Rational)> = Vec::new();
        let sigma = self
            .sigma
            .iter()
            .zip(x)
            .map(|(&i, xv)| match keys.iter().position(|(j, r)| *j == i && *r == xv) {
                Some(p) => p,
                None => {
                    keys.push((i, xv));
                    keys.len() - 1
                }
            })
            .collect();
        Some(IndexMap::new(sigma).expect("refinement is surjective"))
    }
}

/// `(Σ_{v ∈ V_i} x_v)_i`.
pub fn almost_fold(x: &[Rational], sigma: &IndexMap) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); sigma.classes()];
    for (v, xv) in x.iter().enumerate() {
        out[sigma.class_of(v)] += xv;
    }
    out
}

/// Class averages.
pub fn fold_vector(x: &[Rational], sigma: &IndexMap) -> Vec<Rational> {
    almost_fold(x, sigma).into_iter().zip(sigma.sizes()).map(|(s, &n)| s / int(n as i64)).collect()
}

pub fn unfold(folded: &[Rational], sigma: &IndexMap) -> Vec<Rational> {
    (0..sigma.source_len()).map(|v| folded[sigma.class_of(v)].clone()).collect()
}

/// An index map on `V × V` that is consistent, i.e. induced by some `τ` on `V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixIndexMap {
    tau: IndexMap,
}

impl MatrixIndexMap {
    pub fn from_tau(tau: IndexMap) -> Self {
        MatrixIndexMap { tau }
    }

    /// Validates a pair map `σ(u, w)` and recovers `τ`: `u ~ u'` iff their
    /// rows carry the same labels, and `σ` must be determined by the pair
    /// of row classes.
    pub fn new(pair_classes: &[Vec<usize>]) -> Result<Self> {
        let n = pair_classes.len();
        if pair_classes.iter().any(|r| r.len() != n) {
            return contract("pair map must be square");
        }
        let mut tau = vec![usize::MAX; n];
        let mut reps: Vec<usize> = Vec::new();
        for u in 0..n {
            // u and w share a τ-class iff σ(u,·) and σ(w,·) coincide
            match reps.iter().position(|&r| pair_classes[r] == pair_classes[u]) {
                Some(c) => tau[u] = c,
                None => {
                    tau[u] = reps.len();
                    reps.push(u);
                }
            }
        }
        let k = reps.len();
        let mut label = vec![vec![None; k]; k];
        for u in 0..n {
            for w in 0..n {
                let slot = &mut label[tau[u]][tau[w]];
                match slot {
                    None => *slot = Some(pair_classes[u][w]),
                    Some(l) if *l != pair_classes[u][w] => return contract("pair map is not consistent"),
                    _ => {}
                }
            }
        }
        let flat: Vec<usize> = label.iter().flatten().map(|l| l.expect("filled")).collect();
        let mut sorted = flat.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != flat.len() {
            return contract("pair map merges distinct class pairs");
        }
        Ok(MatrixIndexMap { tau: IndexMap::new(tau)? })
    }

    pub fn tau(&self) -> &IndexMap {
        &self.tau
    }
}

/// `X̂_{ij}` = average of `X_{uw}` over `τ(u) = i`, `τ(w) = j`.
pub fn fold_matrix(x: &RatMatrix, sigma: &MatrixIndexMap) -> Result<RatMatrix> {
    let tau = &sigma.tau;
    if x.rows() != tau.source_len() || !x.is_square() {
        return contract("matrix does not match the index map");
    }
    let k = tau.classes();
    let mut out = RatMatrix::zeros(k, k);
    for u in 0..x.rows() {
        for w in 0..x.cols() {
            out[(tau.class_of(u), tau.class_of(w))] += &x[(u, w)];
        }
    }
    for i in 0..k {
        for j in 0..k {
            out[(i, j)] = &out[(i, j)] / int((tau.sizes()[i] * tau.sizes()[j]) as i64);
        }
    }
    Ok(out)
}

/// Folds a PSD matrix, certifying both the input and the result.
pub fn fold_psd_check(x: &RatMatrix, sigma: &MatrixIndexMap) -> Result<RatMatrix> {
    if !crate::exactlin::psd_certificate(x)?.is_psd() {
        return contract("fold_psd_check needs a PSD input");
    }
    let folded = fold_matrix(x, sigma)?;
    if !crate::exactlin::psd_certificate(&folded)?.is_psd() {
        return contract("folded matrix lost positive semidefiniteness");
    }
    Ok(folded)
}
