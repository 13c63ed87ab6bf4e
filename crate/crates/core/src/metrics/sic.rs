use crate::error::{Error, Result};

/// Successive-interference-cancellation decoding order.
///
/// Stored as a decode sequence: `sequence()[0]` is decoded first by everyone
/// and is the weakest user; the last entry decodes everyone else and sees no
/// interference. The pairwise form has α_{k,r} = 1 exactly when r is decoded
/// after k, i.e. user k treats r as noise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SicOrder {
    sequence: Vec<usize>,
    position: Vec<usize>,
}

impl SicOrder {
    pub fn from_sequence(sequence: Vec<usize>) -> Result<Self> {
        let k = sequence.len();
        let mut position = vec![usize::MAX; k];
        for (i, &u) in sequence.iter().enumerate() {
            if u >= k || position[u] != usize::MAX {
                return Err(Error::InvalidInput(format!("{sequence:?} is not a permutation of 0..{k}")));
            }
            position[u] = i;
        }
        Ok(Self { sequence, position })
    }

    pub fn identity(k: usize) -> Self {
        Self::from_sequence((0..k).collect()).expect("identity permutation")
    }

    /// Orders by channel gain: weaker users decode first. Equal gains treat the lower index as stronger.
    pub fn by_gain(gains: &[f64]) -> Self {
        let mut seq: Vec<usize> = (0..gains.len()).collect();
        seq.sort_by(|&a, &b| gains[a].total_cmp(&gains[b]).then(b.cmp(&a)));
        Self::from_sequence(seq).expect("sorted indices form a permutation")
    }

    /// Builds the order from a pairwise indicator matrix. Diagonal entries are ignored.
    pub fn from_pairwise(alpha: &[Vec<f64>]) -> Result<Self> {
        let k = alpha.len();
        if alpha.iter().any(|row| row.len() != k) {
            return Err(Error::Dimension("pairwise indicator must be square".into()));
        }
        let mut position = vec![0usize; k];
        for i in 0..k {
            let mut after = 0;
            for j in 0..k {
                if i == j {
                    continue;
                }
                let (a, b) = (alpha[i][j], alpha[j][i]);
                if !(a == 0.0 || a == 1.0) {
                    return Err(Error::InvalidInput(format!("alpha[{i}][{j}] = {a} is not binary")));
                }
                if a + b != 1.0 {
                    return Err(Error::InvalidInput(format!("alpha[{i}][{j}] + alpha[{j}][{i}] != 1")));
                }
                after += a as usize;
            }
            position[i] = k - 1 - after;
        }
        let mut sequence = vec![usize::MAX; k];
        for (u, &p) in position.iter().enumerate() {
            if sequence[p] != usize::MAX {
                return Err(Error::InvalidInput("pairwise indicator encodes a cyclic order".into()));
            }
            sequence[p] = u;
        }
        Self::from_sequence(sequence)
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    /// Index of user k in the decode sequence.
    pub fn position(&self, k: usize) -> usize {
        self.position[k]
    }

    /// α_{k,r}.
    pub fn alpha(&self, k: usize, r: usize) -> f64 {
        if k != r && self.position[r] > self.position[k] { 1.0 } else { 0.0 }
    }

    pub fn to_pairwise(&self) -> Vec<Vec<f64>> {
        let k = self.len();
        (0..k).map(|i| (0..k).map(|j| self.alpha(i, j)).collect()).collect()
    }

    /// All K! orders in lexicographic order of the decode sequence.
    pub fn all(k: usize) -> Vec<SicOrder> {
        let mut out = Vec::new();
        let mut seq: Vec<usize> = (0..k).collect();
        permute(&mut seq, 0, &mut out);
        out.sort_by(|a, b| a.sequence.cmp(&b.sequence));
        out
    }
}

fn permute(seq: &mut Vec<usize>, i: usize, out: &mut Vec<SicOrder>) {
    if i + 1 >= seq.len() {
        out.push(SicOrder::from_sequence(seq.clone()).expect("permutation"));
        return;
    }
    for j in i..seq.len() {
        seq.swap(i, j);
        permute(seq, i + 1, out);
        seq.swap(i, j);
    }
}
