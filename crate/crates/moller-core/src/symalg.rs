//! Graded-symmetric algebra on a finite generator space: weight-truncated
//! monomial bases with Koszul signs, products, derivation and algebra-map
//! extensions, dualized brackets, and formal-parameter-indexed families of
//! graded maps.
//!
//! Monomials are multisets of generators in canonical order (generators sorted
//! by degree, then label); odd generators never repeat. A weight-W truncation
//! enumerates every monomial of weight <= W; operations that would leave the
//! truncation record the offending domain monomials in an overflow set instead
//! of silently dropping terms.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::exactlin::{Degree, GradedMap, GradedVectorSpace, Rat, SparseMat};

/// Sign of the Koszul rule for permuting homogeneous elements.
/// `perm[k]` is the index (into `degrees`) of the element standing at
/// position k after the permutation.
pub fn koszul_sign(perm: &[usize], degrees: &[Degree]) -> i32 {
    assert_eq!(perm.len(), degrees.len(), "length mismatch");
    let mut sign = 1;
    for a in 0..perm.len() {
        for b in (a + 1)..perm.len() {
            if perm[a] > perm[b] && degrees[perm[a]] % 2 != 0 && degrees[perm[b]] % 2 != 0 {
                sign = -sign;
            }
        }
    }
    sign
}

/// Sign for pulling the letters at `positions` (kept in order) to the front of
/// a word with the given degrees.
pub fn extract_front_sign(degrees: &[Degree], positions: &[usize]) -> i32 {
    let inside: BTreeSet<usize> = positions.iter().copied().collect();
    let mut sign = 1;
    for &s in positions {
        if degrees[s] % 2 == 0 {
            continue;
        }
        for r in 0..s {
            if !inside.contains(&r) && degrees[r] % 2 != 0 {
                sign = -sign;
            }
        }
    }
    sign
}

/// A monomial: sorted generator indices (canonical order).
pub type Mono = Vec<u32>;

/// Sparse element of a `SymBasis`: global monomial index -> coefficient.
pub type Elt = BTreeMap<usize, Rat>;

/// All monomials of weight <= max_weight over a generator space.
#[derive(Clone, Debug)]
pub struct SymBasis {
    /// Canonically ordered generators (degree, label).
    gens: Vec<(Degree, String)>,
    pub max_weight: usize,
    /// Global monomial list, ordered by (weight, lexicographic).
    monos: Vec<Mono>,
    index: BTreeMap<Mono, usize>,
    /// The spanned graded space; per-degree basis order is the global order
    /// restricted to the degree.
    pub space: GradedVectorSpace,
    /// Global index -> (degree, position within degree).
    pos: Vec<(Degree, usize)>,
    by_degree: BTreeMap<Degree, Vec<usize>>,
}

impl SymBasis {
    pub fn new(generators: &GradedVectorSpace, max_weight: usize) -> Self {
        let mut gens: Vec<(Degree, String)> = Vec::new();
        let mut seen: BTreeSet<String> = BTreeSet::new();
        for (d, labels) in generators.iter() {
            for l in labels {
                assert!(
                    seen.insert(l.clone()),
                    "generator labels must be globally unique"
                );
                gens.push((d, l.clone()));
            }
        }
        gens.sort();
        let mut monos: Vec<Mono> = vec![Vec::new()];
        let mut layer: Vec<Mono> = vec![Vec::new()];
        for _ in 1..=max_weight {
            let mut next: Vec<Mono> = Vec::new();
            for m in &layer {
                let start = m.last().map_or(0, |&g| g as usize);
                for g in start..gens.len() {
                    let odd = gens[g].0 % 2 != 0;
                    if odd && m.last() == Some(&(g as u32)) {
                        continue;
                    }
                    let mut m2 = m.clone();
                    m2.push(g as u32);
                    next.push(m2);
                }
            }
            monos.extend(next.iter().cloned());
            layer = next;
        }
        let mut index = BTreeMap::new();
        let mut by_degree: BTreeMap<Degree, Vec<usize>> = BTreeMap::new();
        let mut comps: BTreeMap<Degree, Vec<String>> = BTreeMap::new();
        let mut pos = Vec::with_capacity(monos.len());
        for (g, m) in monos.iter().enumerate() {
            index.insert(m.clone(), g);
            let deg: Degree = m.iter().map(|&i| gens[i as usize].0).sum();
            let label = render_mono(&gens, m);
            let entry = comps.entry(deg).or_default();
            let p = entry.len();
            entry.push(label);
            by_degree.entry(deg).or_default().push(g);
            pos.push((deg, p));
        }
        SymBasis {
            gens,
            max_weight,
            monos,
            index,
            space: GradedVectorSpace::new(comps),
            pos,
            by_degree,
        }
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_degree(&self, g: usize) -> Degree {
        self.gens[g].0
    }

    pub fn gen_label(&self, g: usize) -> &str {
        &self.gens[g].1
    }

    /// Generator index by label (labels are globally unique).
    pub fn gen_by_label(&self, label: &str) -> Option<usize> {
        self.gens.iter().position(|(_, l)| l == label)
    }

    /// The generator space in canonical order (weight-1 component).
    pub fn gen_space(&self) -> GradedVectorSpace {
        let mut comps: BTreeMap<Degree, Vec<String>> = BTreeMap::new();
        for (d, l) in &self.gens {
            comps.entry(*d).or_default().push(l.clone());
        }
        GradedVectorSpace::new(comps)
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn mono(&self, g: usize) -> &Mono {
        &self.monos[g]
    }

    pub fn weight(&self, g: usize) -> usize {
        self.monos[g].len()
    }

    pub fn degree_of(&self, g: usize) -> Degree {
        self.pos[g].0
    }

    /// (degree, position within degree) of a global index.
    pub fn position(&self, g: usize) -> (Degree, usize) {
        self.pos[g]
    }

    pub fn global_at(&self, deg: Degree, p: usize) -> usize {
        self.by_degree[&deg][p]
    }

    pub fn lookup(&self, m: &Mono) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn mono_degree(&self, m: &Mono) -> Degree {
        m.iter().map(|&i| self.gens[i as usize].0).sum()
    }

    pub fn label_of(&self, g: usize) -> String {
        render_mono(&self.gens, &self.monos[g])
    }

    /// Indices of all monomials of an exact weight, in global order.
    pub fn of_weight(&self, w: usize) -> Vec<usize> {
        (0..self.len()).filter(|&g| self.weight(g) == w).collect()
    }

    /// Graded space spanned by the monomials of one exact weight; basis order
    /// per degree inherits the global order.
    pub fn weight_space(&self, w: usize) -> GradedVectorSpace {
        let mut comps: BTreeMap<Degree, Vec<String>> = BTreeMap::new();
        for g in self.of_weight(w) {
            comps
                .entry(self.degree_of(g))
                .or_default()
                .push(self.label_of(g));
        }
        GradedVectorSpace::new(comps)
    }

    /// Position of a global index within its (weight, degree) slice of
    /// `weight_space(w)`.
    pub fn weight_position(&self, g: usize) -> usize {
        let (deg, _) = self.pos[g];
        let w = self.weight(g);
        self.by_degree[&deg]
            .iter()
            .filter(|&&o| self.weight(o) == w)
            .position(|&o| o == g)
            .expect("index in its own degree slice")
    }

    /// Product of two canonical monomials: merged monomial and Koszul sign,
    /// or None when an odd generator repeats. The result may exceed
    /// max_weight; callers decide how to treat overflow.
    pub fn mul_mono(&self, a: &Mono, b: &Mono) -> Option<(Mono, i32)> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut sign = 1i32;
        let mut odd_rest_a = a
            .iter()
            .filter(|&&g| self.gens[g as usize].0 % 2 != 0)
            .count();
        let (mut ia, mut ib) = (0usize, 0usize);
        while ia < a.len() || ib < b.len() {
            let take_a = match (a.get(ia), b.get(ib)) {
                (Some(x), Some(y)) => x <= y,
                (Some(_), None) => true,
                _ => false,
            };
            if take_a {
                let g = a[ia];
                if self.gens[g as usize].0 % 2 != 0 {
                    if out.last() == Some(&g) {
                        return None;
                    }
                    odd_rest_a -= 1;
                }
                out.push(g);
                ia += 1;
            } else {
                let g = b[ib];
                if self.gens[g as usize].0 % 2 != 0 {
                    if out.last() == Some(&g) {
                        return None;
                    }
                    if odd_rest_a % 2 != 0 {
                        sign = -sign;
                    }
                }
                out.push(g);
                ib += 1;
            }
        }
        Some((out, sign))
    }

    /// Product of sparse elements. Overflowing result monomials are returned
    /// separately, never dropped silently.
    pub fn mul_elt(&self, a: &Elt, b: &Elt) -> Product {
        let mut elt: Elt = BTreeMap::new();
        let mut overflow = false;
        for (&ga, ca) in a {
            for (&gb, cb) in b {
                let Some((m, s)) = self.mul_mono(&self.monos[ga], &self.monos[gb]) else {
                    continue;
                };
                match self.lookup(&m) {
                    Some(g) => {
                        let c = ca * cb * Rat::from_integer(s.into());
                        add_term(&mut elt, g, c);
                    }
                    None => overflow = true,
                }
            }
        }
        Product { elt, overflow }
    }

    /// Ordered product of a list of letters/elements, left to right.
    pub fn product(&self, factors: &[Elt]) -> Product {
        let mut acc: Elt = BTreeMap::new();
        acc.insert(0, Rat::one()); // the unit monomial
        let mut overflow = false;
        for f in factors {
            let p = self.mul_elt(&acc, f);
            overflow |= p.overflow;
            acc = p.elt;
            if acc.is_empty() {
                break;
            }
        }
        Product { elt: acc, overflow }
    }

    /// Single-generator element.
    pub fn gen_elt(&self, g: usize) -> Elt {
        let idx = self
            .lookup(&vec![g as u32])
            .expect("weight 1 is inside every truncation");
        let mut e = BTreeMap::new();
        e.insert(idx, Rat::one());
        e
    }

    /// View a column of a gens -> sym-space graded map as an element.
    pub fn column_elt(&self, map: &GradedMap, gen: usize) -> Elt {
        let (gdeg, _) = (self.gens[gen].0, ());
        let col = self
            .gen_space()
            .index_of(gdeg, &self.gens[gen].1)
            .expect("generator in its own space");
        let tdeg = gdeg + map.shift;
        let block = map.block(gdeg);
        let mut e = BTreeMap::new();
        for r in 0..block.rows {
            let v = block.get(r, col);
            if !v.is_zero() {
                e.insert(self.global_at(tdeg, r), v);
            }
        }
        e
    }

    /// Extend a generator-level map of degree `shift` to a derivation on the
    /// truncation (Koszul-signed Leibniz rule). Returns the derivation and the
    /// set of domain monomials whose image overflowed the truncation.
    pub fn extend_derivation(&self, gen_map: &GradedMap) -> (GradedMap, BTreeSet<usize>) {
        assert_eq!(gen_map.source, self.gen_space(), "derivation source");
        assert_eq!(gen_map.target, self.space, "derivation target");
        let shift = gen_map.shift;
        let images: Vec<Elt> = (0..self.gens.len())
            .map(|g| self.column_elt(gen_map, g))
            .collect();
        let mut out = GradedMap::zero(&self.space, &self.space, shift);
        let mut overflow = BTreeSet::new();
        for g in 0..self.len() {
            let m = self.monos[g].clone();
            let (src_deg, src_pos) = self.pos[g];
            let mut prefix_parity = 0i64;
            for t in 0..m.len() {
                let letter = m[t] as usize;
                let img = &images[letter];
                if !img.is_empty() {
                    let sign_pref = if shift % 2 != 0 && prefix_parity % 2 != 0 {
                        -1i32
                    } else {
                        1
                    };
                    let left: Elt = match self.lookup(&m[..t].to_vec()) {
                        Some(ix) => BTreeMap::from([(ix, Rat::one())]),
                        None => unreachable!("sub-monomial stays in truncation"),
                    };
                    let right: Elt = BTreeMap::from([(
                        self.lookup(&m[t + 1..].to_vec())
                            .expect("sub-monomial stays in truncation"),
                        Rat::one(),
                    )]);
                    let p = self.product(&[left, img.clone(), right]);
                    if p.overflow {
                        overflow.insert(g);
                    }
                    for (tg, c) in p.elt {
                        let (tdeg, tpos) = self.pos[tg];
                        debug_assert_eq!(tdeg, src_deg + shift);
                        let v = c * Rat::from_integer(sign_pref.into());
                        out.add_to_block(src_deg, tpos, src_pos, &v);
                    }
                }
                prefix_parity += self.gens[letter].0;
            }
        }
        (out, overflow)
    }

    /// Extend a degree-0 generator map (values in a target truncation) to an
    /// algebra morphism: monomials go to ordered products of the generator
    /// images. Returns the map and the overflowing domain monomials.
    pub fn extend_multiplicative(
        &self,
        gen_images: &[Elt],
        target: &SymBasis,
    ) -> (GradedMap, BTreeSet<usize>) {
        assert_eq!(gen_images.len(), self.gens.len());
        let mut out = GradedMap::zero(&self.space, &target.space, 0);
        let mut overflow = BTreeSet::new();
        for g in 0..self.len() {
            let (src_deg, src_pos) = self.pos[g];
            let factors: Vec<Elt> = self.monos[g]
                .iter()
                .map(|&l| gen_images[l as usize].clone())
                .collect();
            let p = target.product(&factors);
            if p.overflow {
                overflow.insert(g);
            }
            for (tg, c) in p.elt {
                let (tdeg, tpos) = target.pos[tg];
                debug_assert_eq!(tdeg, src_deg);
                out.add_to_block(src_deg, tpos, src_pos, &c);
            }
        }
        (out, overflow)
    }

    /// Multiplicative extension of a formal family of generator images
    /// (`gen_images[g][n]` = order-n part). Order-0 images must be weight-1.
    /// Returns per-order maps plus overflowing domain monomials per order.
    pub fn extend_multiplicative_formal(
        &self,
        gen_images: &[Vec<Elt>],
        max_order: usize,
        target: &SymBasis,
    ) -> (Vec<GradedMap>, BTreeSet<usize>) {
        assert_eq!(gen_images.len(), self.gens.len());
        let mut orders: Vec<GradedMap> = (0..=max_order)
            .map(|_| GradedMap::zero(&self.space, &target.space, 0))
            .collect();
        let mut overflow = BTreeSet::new();
        for g in 0..self.len() {
            let (src_deg, src_pos) = self.pos[g];
            // per-order accumulation of the ordered product
            let mut acc: Vec<Elt> = vec![BTreeMap::new(); max_order + 1];
            acc[0].insert(0, Rat::one());
            let mut over = false;
            for &l in &self.monos[g] {
                let imgs = &gen_images[l as usize];
                let mut next: Vec<Elt> = vec![BTreeMap::new(); max_order + 1];
                for n in 0..=max_order {
                    for k in 0..=n {
                        let f = imgs.get(n - k);
                        let (Some(f), false) = (f, acc[k].is_empty()) else {
                            continue;
                        };
                        let p = target.mul_elt(&acc[k], f);
                        over |= p.overflow;
                        for (tg, c) in p.elt {
                            add_term(&mut next[n], tg, c);
                        }
                    }
                }
                acc = next;
            }
            if over {
                overflow.insert(g);
            }
            for (n, elt) in acc.into_iter().enumerate() {
                for (tg, c) in elt {
                    let (_, tpos) = target.pos[tg];
                    orders[n].add_to_block(src_deg, tpos, src_pos, &c);
                }
            }
        }
        (orders, overflow)
    }

    /// Re-index a map between generator spaces (matched by label, any
    /// per-degree ordering) as a generator-level map into this truncation,
    /// ready for derivation extension.
    pub fn embed_gen_level(&self, m: &GradedMap) -> GradedMap {
        let gs = self.gen_space();
        let mut out = GradedMap::zero(&gs, &self.space, m.shift);
        for g in 0..self.num_gens() {
            let deg = self.gen_degree(g);
            let label = self.gen_label(g).to_string();
            let Some(src_col) = m.source.index_of(deg, &label) else {
                continue;
            };
            let col = gs.index_of(deg, &label).expect("generator in own space");
            let block = m.block(deg);
            if block.is_zero() {
                continue;
            }
            let tdeg = deg + m.shift;
            for r in 0..block.rows {
                let v = block.get(r, src_col);
                if v.is_zero() {
                    continue;
                }
                let rlabel = &m.target.labels(tdeg)[r];
                let tg = self
                    .gen_by_label(rlabel)
                    .expect("image label among generators");
                let ix = self.lookup(&vec![tg as u32]).expect("weight-1 monomial");
                let (_, tpos) = self.pos[ix];
                out.add_to_block(deg, tpos, col, &v);
            }
        }
        out
    }

    /// Extract one (source weight, target weight) sub-block of a map on this
    /// truncation, at the given source degree. Rows and columns follow the
    /// per-weight monomial order.
    pub fn weight_block(
        &self,
        map: &GradedMap,
        deg: Degree,
        w_src: usize,
        w_tgt: usize,
    ) -> SparseMat {
        let tdeg = deg + map.shift;
        let cols: Vec<usize> = self
            .of_weight(w_src)
            .into_iter()
            .filter(|&g| self.degree_of(g) == deg)
            .map(|g| self.pos[g].1)
            .collect();
        let rows: Vec<usize> = self
            .of_weight(w_tgt)
            .into_iter()
            .filter(|&g| self.degree_of(g) == tdeg)
            .map(|g| self.pos[g].1)
            .collect();
        let block = map.block(deg);
        let mut out = SparseMat::zero(rows.len(), cols.len());
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                let v = block.get(r, c);
                if !v.is_zero() {
                    out.set(ri, ci, v);
                }
            }
        }
        out
    }
}

pub struct Product {
    pub elt: Elt,
    pub overflow: bool,
}

pub fn add_term(e: &mut Elt, g: usize, c: Rat) {
    if c.is_zero() {
        return;
    }
    let cur = e.remove(&g).unwrap_or_else(Rat::zero) + c;
    if !cur.is_zero() {
        e.insert(g, cur);
    }
}

fn render_mono(gens: &[(Degree, String)], m: &Mono) -> String {
    if m.is_empty() {
        return String::from("1");
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < m.len() {
        let mut j = i;
        while j < m.len() && m[j] == m[i] {
            j += 1;
        }
        let label = &gens[m[i] as usize].1;
        if j - i == 1 {
            parts.push(label.clone());
        } else {
            parts.push(format!("{}^{}", label, j - i));
        }
        i = j;
    }
    parts.join("*")
}

/// Dualize an arity-n bracket Sym^n F -> F into a generator-level map
/// F* -> Sym^n F* with the monomial-dual pairing (dual monomial bases pair to
/// 1 against their monomials, no factorial factors).
///
/// `field_sym` must be the weight-n basis the bracket's source refers to;
/// `dual_basis` is the truncation the image lives in (max_weight >= n).
pub fn dualize_bracket(
    ln: &GradedMap,
    arity: usize,
    field_sym: &SymBasis,
    dual_basis: &SymBasis,
) -> GradedMap {
    assert!(dual_basis.max_weight >= arity, "dual truncation too small");
    assert_eq!(ln.shift, 1, "brackets have degree +1");
    let dual_gens = dual_basis.gen_space();
    let field_gens = field_sym.gen_space();
    // field generator index -> dual generator index, matched by label
    let field_to_dual: Vec<usize> = (0..field_sym.num_gens())
        .map(|g| {
            dual_basis
                .gen_by_label(field_sym.gen_label(g))
                .expect("dual generators mirror field generators")
        })
        .collect();
    let mut out = GradedMap::zero(&dual_gens, &dual_basis.space, 1);
    for g in field_sym.of_weight(arity) {
        let (src_deg, _) = field_sym.position(g);
        let spos = field_sym.weight_position(g);
        let block = ln.block(src_deg);
        if block.is_zero() {
            continue;
        }
        // dual monomial of this source monomial
        let mut dual_mono: Mono = field_sym
            .mono(g)
            .iter()
            .map(|&l| field_to_dual[l as usize] as u32)
            .collect();
        dual_mono.sort_unstable();
        let dg = dual_basis
            .lookup(&dual_mono)
            .expect("weight-n monomial inside dual truncation");
        let (ddeg, dpos) = dual_basis.position(dg);
        for r in 0..block.rows {
            let v = block.get(r, spos);
            if v.is_zero() {
                continue;
            }
            // field target y = basis vector r in degree src_deg + 1; its dual
            // generator has degree -(src_deg + 1)
            let ylabel = &field_gens.labels(src_deg + 1)[r];
            let dgen = dual_basis
                .gen_by_label(ylabel)
                .expect("dual generators mirror field generators");
            let dgen_deg = dual_basis.gen_degree(dgen);
            debug_assert_eq!(dgen_deg, -(src_deg + 1));
            debug_assert_eq!(ddeg, dgen_deg + 1);
            let col = dual_gens
                .index_of(dgen_deg, ylabel)
                .expect("dual generator in dual space");
            out.add_to_block(dgen_deg, dpos, col, &v);
        }
    }
    out
}

/// Formal-parameter-indexed family of graded maps: order n is the coefficient
/// of the n-th power of the deformation parameter. Absent orders are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalGradedMap {
    pub source: GradedVectorSpace,
    pub target: GradedVectorSpace,
    pub shift: Degree,
    pub max_order: usize,
    orders: BTreeMap<usize, GradedMap>,
}

impl FormalGradedMap {
    pub fn zero(
        source: &GradedVectorSpace,
        target: &GradedVectorSpace,
        shift: Degree,
        max_order: usize,
    ) -> Self {
        FormalGradedMap {
            source: source.clone(),
            target: target.clone(),
            shift,
            max_order,
            orders: BTreeMap::new(),
        }
    }

    /// Identity at order 0, zero above.
    pub fn identity(space: &GradedVectorSpace, max_order: usize) -> Self {
        let mut f = FormalGradedMap::zero(space, space, 0, max_order);
        f.set_order(0, GradedMap::identity(space));
        f
    }

    pub fn order(&self, n: usize) -> GradedMap {
        self.orders
            .get(&n)
            .cloned()
            .unwrap_or_else(|| GradedMap::zero(&self.source, &self.target, self.shift))
    }

    pub fn order_ref(&self, n: usize) -> Option<&GradedMap> {
        self.orders.get(&n)
    }

    pub fn set_order(&mut self, n: usize, m: GradedMap) {
        assert!(n <= self.max_order, "order beyond declared maximum");
        assert_eq!(m.source, self.source);
        assert_eq!(m.target, self.target);
        assert_eq!(m.shift, self.shift);
        if m.is_zero() {
            self.orders.remove(&n);
        } else {
            self.orders.insert(n, m);
        }
    }

    pub fn nonzero_orders(&self) -> impl Iterator<Item = usize> + '_ {
        self.orders.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.orders.is_empty()
    }

    /// self ∘ other with formal orders collected; truncated at the smaller
    /// max_order.
    pub fn compose(&self, other: &FormalGradedMap) -> FormalGradedMap {
        assert_eq!(other.target, self.source, "formal composition mismatch");
        let max = self.max_order.min(other.max_order);
        let mut out = FormalGradedMap::zero(
            &other.source,
            &self.target,
            self.shift + other.shift,
            max,
        );
        for (&a, ma) in &self.orders {
            for (&b, mb) in &other.orders {
                let n = a + b;
                if n > max {
                    continue;
                }
                let term = ma.compose(mb);
                if !term.is_zero() {
                    out.set_order(n, out.order(n).add(&term));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FormalGradedMap) -> FormalGradedMap {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        assert_eq!(self.shift, other.shift);
        let max = self.max_order.min(other.max_order);
        let mut out = FormalGradedMap::zero(&self.source, &self.target, self.shift, max);
        for n in 0..=max {
            let s = self.order(n).add(&other.order(n));
            out.set_order(n, s);
        }
        out
    }

    pub fn sub(&self, other: &FormalGradedMap) -> FormalGradedMap {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FormalGradedMap {
        let mut out =
            FormalGradedMap::zero(&self.source, &self.target, self.shift, self.max_order);
        for (&n, m) in &self.orders {
            out.set_order(n, m.neg());
        }
        out
    }
}

/// Identity block matrix convenience for tests and models.
pub fn unit_matrix(n: usize) -> SparseMat {
    SparseMat::identity(n)
}
