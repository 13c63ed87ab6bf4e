use crate::error::{Error, Result};
use crate::numerics::C64;
use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlockKind {
    Continuous { lower: f64, upper: f64 },
    Binary,
    /// Stored as interleaved (re, im) pairs.
    Complex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub name: &'static str,
    pub kind: BlockKind,
    /// Number of scalars; complex scalars occupy two slots.
    pub len: usize,
    pub offset: usize,
}

impl Block {
    pub fn width(&self) -> usize {
        match self.kind {
            BlockKind::Complex => 2 * self.len,
            _ => self.len,
        }
    }

    pub fn range(&self) -> Range<usize> {
        self.offset..self.offset + self.width()
    }
}

/// Named blocks of a flat real decision vector.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Layout {
    blocks: Vec<Block>,
    dim: usize,
}

impl Layout {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: &'static str, kind: BlockKind, len: usize) {
        let block = Block { name, kind, len, offset: self.dim };
        self.dim += block.width();
        self.blocks.push(block);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name == name)
    }

    fn get(&self, name: &str) -> &Block {
        self.block(name).unwrap_or_else(|| panic!("layout has no block `{name}`"))
    }

    pub fn range(&self, name: &str) -> Range<usize> {
        self.get(name).range()
    }

    pub fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::Dimension(format!("decision vector has {} entries, layout needs {}", x.len(), self.dim)));
        }
        Ok(())
    }

    pub fn real<'a>(&self, x: &'a [f64], name: &str) -> &'a [f64] {
        &x[self.range(name)]
    }

    pub fn complex(&self, x: &[f64], name: &str) -> Vec<C64> {
        x[self.range(name)].chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect()
    }

    pub fn set_real(&self, x: &mut [f64], name: &str, vals: &[f64]) {
        x[self.range(name)].copy_from_slice(vals);
    }

    pub fn set_complex(&self, x: &mut [f64], name: &str, vals: &[C64]) {
        let r = self.range(name);
        assert_eq!(r.len(), 2 * vals.len(), "block `{name}` size mismatch");
        for (slot, v) in x[r].chunks_exact_mut(2).zip(vals) {
            slot[0] = v.re;
            slot[1] = v.im;
        }
    }

    /// True at every slot that belongs to a binary block.
    pub fn binary_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.dim];
        for b in self.blocks.iter().filter(|b| b.kind == BlockKind::Binary) {
            mask[b.range()].iter_mut().for_each(|m| *m = true);
        }
        mask
    }

    pub fn zeros(&self) -> Vec<f64> {
        vec![0.0; self.dim]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_and_complex_round_trip() {
        let mut l = Layout::new();
        l.push("p", BlockKind::Continuous { lower: 0.0, upper: 1.0 }, 2);
        l.push("w", BlockKind::Complex, 2);
        l.push("b", BlockKind::Binary, 3);
        assert_eq!(l.dim(), 9);
        assert_eq!(l.range("b"), 6..9);
        let mut x = l.zeros();
        let w = [C64::new(1.0, -2.0), C64::new(0.5, 3.0)];
        l.set_complex(&mut x, "w", &w);
        assert_eq!(l.complex(&x, "w"), w.to_vec());
        assert_eq!(l.binary_mask().iter().filter(|m| **m).count(), 3);
        assert!(l.check(&x[..8]).is_err());
    }
}
