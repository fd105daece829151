//! Finite-dimensional Z-graded vector spaces with named ordered bases, and
//! graded linear maps stored block-per-degree.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use super::matrix::{Rat, SparseMat};

/// Degree index.
pub type Degree = i64;

/// Map degree -> ordered basis labels. Unmentioned degrees are zero; empty
/// lists are never stored. Basis order is part of the value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedVectorSpace {
    components: BTreeMap<Degree, Vec<String>>,
}

impl GradedVectorSpace {
    pub fn new(components: BTreeMap<Degree, Vec<String>>) -> Self {
        let mut comps = components;
        comps.retain(|_, labels| !labels.is_empty());
        for labels in comps.values() {
            for (i, l) in labels.iter().enumerate() {
                assert!(
                    !labels[..i].contains(l),
                    "duplicate basis label within a degree"
                );
            }
        }
        GradedVectorSpace { components: comps }
    }

    pub fn empty() -> Self {
        GradedVectorSpace {
            components: BTreeMap::new(),
        }
    }

    pub fn dim(&self, deg: Degree) -> usize {
        self.components.get(&deg).map_or(0, |v| v.len())
    }

    pub fn total_dim(&self) -> usize {
        self.components.values().map(|v| v.len()).sum()
    }

    pub fn degrees(&self) -> impl Iterator<Item = Degree> + '_ {
        self.components.keys().copied()
    }

    pub fn labels(&self, deg: Degree) -> &[String] {
        self.components.get(&deg).map_or(&[], |v| v.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (Degree, &Vec<String>)> {
        self.components.iter().map(|(&d, v)| (d, v))
    }

    pub fn min_degree(&self) -> Option<Degree> {
        self.components.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<Degree> {
        self.components.keys().next_back().copied()
    }

    /// Position of a label within its degree.
    pub fn index_of(&self, deg: Degree, label: &str) -> Option<usize> {
        self.components.get(&deg)?.iter().position(|l| l == label)
    }

    /// Same labels, every degree negated; basis order within each (new) degree
    /// preserved. This is the underlying space of the linear dual.
    pub fn dual(&self) -> GradedVectorSpace {
        let mut comps = BTreeMap::new();
        for (d, labels) in &self.components {
            comps.insert(-d, labels.clone());
        }
        GradedVectorSpace { components: comps }
    }
}

/// Degree-homogeneous linear map: block at source degree k maps into target
/// degree k + shift. Missing blocks are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub source: GradedVectorSpace,
    pub target: GradedVectorSpace,
    pub shift: Degree,
    blocks: BTreeMap<Degree, SparseMat>,
}

impl GradedMap {
    pub fn zero(source: &GradedVectorSpace, target: &GradedVectorSpace, shift: Degree) -> Self {
        GradedMap {
            source: source.clone(),
            target: target.clone(),
            shift,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(space: &GradedVectorSpace) -> Self {
        let mut m = GradedMap::zero(space, space, 0);
        for (d, labels) in space.iter() {
            m.set_block(d, SparseMat::identity(labels.len()));
        }
        m
    }

    pub fn block_shape(&self, deg: Degree) -> (usize, usize) {
        (self.target.dim(deg + self.shift), self.source.dim(deg))
    }

    /// Materialized block (zero if absent).
    pub fn block(&self, deg: Degree) -> SparseMat {
        let (r, c) = self.block_shape(deg);
        self.blocks
            .get(&deg)
            .cloned()
            .unwrap_or_else(|| SparseMat::zero(r, c))
    }

    pub fn block_ref(&self, deg: Degree) -> Option<&SparseMat> {
        self.blocks.get(&deg)
    }

    pub fn set_block(&mut self, deg: Degree, m: SparseMat) {
        let (r, c) = self.block_shape(deg);
        assert_eq!((m.rows, m.cols), (r, c), "block shape mismatch at degree {deg}");
        if m.is_zero() {
            self.blocks.remove(&deg);
        } else {
            self.blocks.insert(deg, m);
        }
    }

    pub fn add_to_block(&mut self, deg: Degree, r: usize, c: usize, v: &Rat) {
        if v.is_zero() {
            return;
        }
        let (br, bc) = self.block_shape(deg);
        let m = self
            .blocks
            .entry(deg)
            .or_insert_with(|| SparseMat::zero(br, bc));
        m.add_to(r, c, v);
        if m.is_zero() {
            self.blocks.remove(&deg);
        }
    }

    pub fn nonzero_degrees(&self) -> impl Iterator<Item = Degree> + '_ {
        self.blocks.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|m| m.is_zero())
    }

    /// self after other (self ∘ other).
    pub fn compose(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(
            other.target, self.source,
            "composition source/target mismatch"
        );
        let mut out = GradedMap::zero(&other.source, &self.target, self.shift + other.shift);
        for (&d, m) in &other.blocks {
            if let Some(mine) = self.blocks.get(&(d + other.shift)) {
                let prod = mine.mul(m);
                if !prod.is_zero() {
                    out.set_block(d, prod);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(self.source, other.source, "sum source mismatch");
        assert_eq!(self.target, other.target, "sum target mismatch");
        assert_eq!(self.shift, other.shift, "sum shift mismatch");
        let mut out = self.clone();
        for (&d, m) in &other.blocks {
            let cur = out.block(d).add(m);
            out.set_block(d, cur);
        }
        out
    }

    pub fn sub(&self, other: &GradedMap) -> GradedMap {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GradedMap {
        let mut out = GradedMap::zero(&self.source, &self.target, self.shift);
        for (&d, m) in &self.blocks {
            out.set_block(d, m.neg());
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> GradedMap {
        let mut out = GradedMap::zero(&self.source, &self.target, self.shift);
        if s.is_zero() {
            return out;
        }
        for (&d, m) in &self.blocks {
            out.set_block(d, m.scale(s));
        }
        out
    }

    /// Blockwise transpose: a map dual-target -> dual-source of the same
    /// shift, in the dual bases (degrees negated, labels kept).
    pub fn transpose_dual(&self) -> GradedMap {
        let src = self.target.dual();
        let tgt = self.source.dual();
        let mut out = GradedMap::zero(&src, &tgt, self.shift);
        for (&d, m) in &self.blocks {
            // block at source degree d maps to d+shift; transposed block starts
            // at dual degree -(d+shift) and lands in -d = -(d+shift)+shift
            out.set_block(-(d + self.shift), m.transpose());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::matrix::rat_int;
    use alloc::string::ToString;
    use alloc::vec;

    pub fn space(parts: &[(Degree, &[&str])]) -> GradedVectorSpace {
        let mut comps = BTreeMap::new();
        for (d, labels) in parts {
            comps.insert(*d, labels.iter().map(|l| l.to_string()).collect());
        }
        GradedVectorSpace::new(comps)
    }

    #[test]
    fn identity_and_compose() {
        let v = space(&[(0, &["x", "y"]), (1, &["z"])]);
        let id = GradedMap::identity(&v);
        assert_eq!(id.compose(&id), id);

        let mut d = GradedMap::zero(&v, &v, 1);
        let mut b = SparseMat::zero(1, 2);
        b.set(0, 0, rat_int(2));
        d.set_block(0, b);
        assert!(d.compose(&d).is_zero());
        assert_eq!(id.compose(&d), d);
        assert_eq!(d.compose(&id), d);
    }

    #[test]
    fn transpose_dual_round_trip() {
        let v = space(&[(0, &["x"]), (1, &["u", "w"])]);
        let mut d = GradedMap::zero(&v, &v, 1);
        d.set_block(0, SparseMat::from_columns(2, &[vec![rat_int(3), rat_int(-1)]]));
        let dt = d.transpose_dual();
        assert_eq!(dt.shift, 1);
        assert_eq!(dt.source, v.dual());
        // dual block sits at degree -1 and has transposed shape
        assert_eq!(dt.block(-1).rows, 1);
        assert_eq!(dt.block(-1).cols, 2);
        assert_eq!(dt.block(-1).get(0, 0), rat_int(3));
        assert_eq!(dt.transpose_dual(), d);
    }
}
