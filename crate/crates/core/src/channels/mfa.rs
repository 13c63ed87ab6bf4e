use crate::error::{Error, Result};
use crate::numerics::{CMatrix, C64};

/// Candidate positions of one movable element and its K×Q channel bank C_n.
#[derive(Debug, Clone)]
pub struct MfaCandidateSet {
    pub positions: Vec<[f64; 2]>,
    /// Column q is the channel to all users with the element at `positions[q]`.
    pub bank: CMatrix,
}

impl MfaCandidateSet {
    pub fn new(positions: Vec<[f64; 2]>, bank: CMatrix) -> Result<Self> {
        if bank.cols() != positions.len() {
            return Err(Error::Dimension(format!(
                "bank has {} columns for {} positions",
                bank.cols(),
                positions.len()
            )));
        }
        for (i, a) in positions.iter().enumerate() {
            if positions[..i].iter().any(|b| b == a) {
                return Err(Error::InvalidInput(format!("candidate position {i} is duplicated")));
            }
        }
        Ok(Self { positions, bank })
    }

    pub fn q(&self) -> usize {
        self.positions.len()
    }
}

/// One-hot vectors t_n from chosen candidate indices.
pub fn selection_from_indices(indices: &[usize], q: usize) -> Vec<Vec<f64>> {
    indices
        .iter()
        .map(|&i| (0..q).map(|j| if j == i { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn one_hot_index(t: &[f64], n: usize) -> Result<usize> {
    let mut hit = None;
    for (q, &v) in t.iter().enumerate() {
        if v == 1.0 {
            if hit.is_some() {
                return Err(Error::InvalidInput(format!("selection t_{n} has more than one active position")));
            }
            hit = Some(q);
        } else if v != 0.0 {
            return Err(Error::InvalidInput(format!("selection t_{n} has non-binary entry {v}")));
        }
    }
    hit.ok_or_else(|| Error::InvalidInput(format!("selection t_{n} has no active position")))
}

/// C = [C_1, …, C_N], the K×NQ bank whose k-th row is ĥ_k^H.
pub fn mfa_stacked_bank(candidates: &[MfaCandidateSet]) -> Result<CMatrix> {
    let k = candidates.first().map_or(0, |c| c.bank.rows());
    if candidates.iter().any(|c| c.bank.rows() != k) {
        return Err(Error::Dimension("candidate banks disagree on user count".into()));
    }
    let cols: Vec<Vec<C64>> = candidates.iter().flat_map(|c| (0..c.q()).map(|q| c.bank.col(q))).collect();
    if cols.is_empty() {
        return Ok(CMatrix::zeros(k, 0));
    }
    CMatrix::from_columns(&cols)
}

/// H = C·T: column n is C_n·t_n.
pub fn mfa_channel(candidates: &[MfaCandidateSet], selection: &[Vec<f64>]) -> Result<CMatrix> {
    if selection.len() != candidates.len() {
        return Err(Error::Dimension(format!(
            "{} selection vectors for {} elements",
            selection.len(),
            candidates.len()
        )));
    }
    let k = candidates.first().map_or(0, |c| c.bank.rows());
    let mut chosen: Vec<[f64; 2]> = Vec::with_capacity(candidates.len());
    let mut h = CMatrix::zeros(k, candidates.len());
    for (n, (c, t)) in candidates.iter().zip(selection).enumerate() {
        if t.len() != c.q() || c.bank.rows() != k {
            return Err(Error::Dimension(format!("element {n}: selection or bank shape mismatch")));
        }
        let q = one_hot_index(t, n)?;
        let pos = c.positions[q];
        if chosen.contains(&pos) {
            return Err(Error::InvalidInput(format!("element {n} shares position {pos:?} with another element")));
        }
        chosen.push(pos);
        h.set_col(n, &c.bank.col(q));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rng;

    fn random_sets(n: usize, q: usize, k: usize, rng: &mut Rng) -> Vec<MfaCandidateSet> {
        (0..n)
            .map(|e| {
                let pos = (0..q).map(|i| [e as f64, i as f64 * 0.1]).collect();
                MfaCandidateSet::new(pos, CMatrix::from_fn(k, q, |_, _| rng.complex_normal())).unwrap()
            })
            .collect()
    }

    #[test]
    fn single_candidate_is_forced() {
        let mut rng = Rng::new(1);
        let sets = random_sets(3, 1, 2, &mut rng);
        let h = mfa_channel(&sets, &selection_from_indices(&[0, 0, 0], 1)).unwrap();
        assert_eq!(h, mfa_stacked_bank(&sets).unwrap());
    }

    #[test]
    fn relabeling_candidates_keeps_h() {
        let mut rng = Rng::new(2);
        let sets = random_sets(2, 3, 2, &mut rng);
        let h = mfa_channel(&sets, &selection_from_indices(&[1, 2], 3)).unwrap();
        let perm = [2, 0, 1];
        let relabeled: Vec<MfaCandidateSet> = sets
            .iter()
            .map(|s| {
                let pos = perm.iter().map(|&p| s.positions[p]).collect();
                let bank = CMatrix::from_fn(2, 3, |i, j| s.bank[(i, perm[j])]);
                MfaCandidateSet::new(pos, bank).unwrap()
            })
            .collect();
        // old index 1 is new index 2, old 2 is new 0
        let h2 = mfa_channel(&relabeled, &selection_from_indices(&[2, 0], 3)).unwrap();
        assert_eq!(h, h2);
    }

    #[test]
    fn matches_block_diagonal_product() {
        let mut rng = Rng::new(3);
        let (n, q, k) = (3, 4, 2);
        let sets = random_sets(n, q, k, &mut rng);
        let idx: Vec<usize> = (0..n).map(|_| rng.index(q)).collect();
        let t = selection_from_indices(&idx, q);
        let h = mfa_channel(&sets, &t).unwrap();
        let tm = CMatrix::from_fn(n * q, n, |r, c| {
            if r / q == c { C64::new(t[c][r % q], 0.0) } else { C64::new(0.0, 0.0) }
        });
        let want = mfa_stacked_bank(&sets).unwrap().matmul(&tm);
        assert!(h.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn invalid_selections_fail() {
        let mut rng = Rng::new(4);
        let sets = random_sets(2, 2, 1, &mut rng);
        assert!(mfa_channel(&sets, &[vec![1.0, 1.0], vec![1.0, 0.0]]).is_err());
        assert!(mfa_channel(&sets, &[vec![0.5, 0.5], vec![1.0, 0.0]]).is_err());
        assert!(mfa_channel(&sets, &[vec![0.0, 0.0], vec![1.0, 0.0]]).is_err());
        let shared = vec![
            MfaCandidateSet::new(vec![[0.0, 0.0], [1.0, 0.0]], CMatrix::zeros(1, 2)).unwrap(),
            MfaCandidateSet::new(vec![[1.0, 0.0], [2.0, 0.0]], CMatrix::zeros(1, 2)).unwrap(),
        ];
        assert!(mfa_channel(&shared, &selection_from_indices(&[1, 0], 2)).is_err());
        assert!(mfa_channel(&shared, &selection_from_indices(&[0, 0], 2)).is_ok());
    }
}
