//! Bracket families of degree +1 on graded-symmetric powers of a complex,
//! the homotopy Jacobi checker, and constructors that produce valid
//! structures: the shifted Lie bracket on a two-term complex and strict
//! differential graded Lie structures pulled back through a retract.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::exactlin::{
    CochainComplex, Degree, DeformationRetract, GradedMap, Rat, RetractError, SparseMat,
};
use crate::symalg::{add_term, extract_front_sign, Elt, Mono, SymBasis};

/// A complex with a family of degree +1 brackets on its symmetric powers.
/// The arity-1 bracket is the differential; arities beyond `max_arity` are
/// zero. The arity-n bracket's source is the exact-weight-n component of the
/// canonical symmetric basis on the complex's space.
#[derive(Clone, Debug)]
pub struct LInftyStructure {
    pub complex: CochainComplex,
    pub brackets: BTreeMap<usize, GradedMap>,
    pub max_arity: usize,
}

impl LInftyStructure {
    pub fn new(
        complex: CochainComplex,
        brackets: BTreeMap<usize, GradedMap>,
        max_arity: usize,
    ) -> Self {
        let probe = SymBasis::new(&complex.space, 0);
        let _ = probe; // basis construction validates label uniqueness
        for (&n, b) in &brackets {
            assert!(n >= 2, "arity-1 bracket is the differential");
            assert!(n <= max_arity, "bracket beyond declared max arity");
            assert_eq!(b.shift, 1, "brackets have degree +1");
            let basis = SymBasis::new(&complex.space, n);
            assert_eq!(b.source, basis.weight_space(n), "bracket source basis");
            assert_eq!(b.target, complex.space, "bracket target");
        }
        LInftyStructure {
            complex,
            brackets,
            max_arity,
        }
    }

    pub fn strict_dgla(complex: CochainComplex, l2: GradedMap) -> Self {
        let mut brackets = BTreeMap::new();
        brackets.insert(2, l2);
        LInftyStructure::new(complex, brackets, 2)
    }

    pub fn bracket(&self, n: usize) -> Option<&GradedMap> {
        self.brackets.get(&n)
    }

    /// Evaluate the arity-n bracket on a canonical monomial (indices into
    /// `basis`, which must be built on the complex's space with max_weight
    /// >= n). Output coordinates are (degree, row) in the complex's basis.
    pub fn eval_bracket(
        &self,
        basis: &SymBasis,
        n: usize,
        mono: &Mono,
    ) -> Vec<((Degree, usize), Rat)> {
        assert_eq!(mono.len(), n);
        if n == 1 {
            let g = mono[0] as usize;
            let gdeg = basis.gen_degree(g);
            let col = self
                .complex
                .space
                .index_of(gdeg, basis.gen_label(g))
                .expect("generator label in complex");
            let block = self.complex.differential.block(gdeg);
            return (0..block.rows)
                .filter_map(|r| {
                    let v = block.get(r, col);
                    (!v.is_zero()).then_some(((gdeg + 1, r), v))
                })
                .collect();
        }
        let Some(b) = self.brackets.get(&n) else {
            return Vec::new();
        };
        let Some(g) = basis.lookup(mono) else {
            return Vec::new();
        };
        let (deg, _) = basis.position(g);
        let col = basis.weight_position(g);
        let block = b.block(deg);
        (0..block.rows)
            .filter_map(|r| {
                let v = block.get(r, col);
                (!v.is_zero()).then_some(((deg + 1, r), v))
            })
            .collect()
    }
}

/// Outcome of the homotopy Jacobi check for one arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiEntry {
    pub arity: usize,
    pub ok: bool,
    /// Basis monomial on which the identity fails.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiReport {
    pub entries: Vec<JacobiEntry>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.ok)
    }
    pub fn first_failure(&self) -> Option<&JacobiEntry> {
        self.entries.iter().find(|e| !e.ok)
    }
}

/// Check the homotopy Jacobi identity for every arity n <= up_to_arity by
/// evaluating the shuffle sum on the full weight-n basis. Arity 1 is d^2 = 0.
pub fn check_jacobi(l: &LInftyStructure, up_to_arity: usize) -> JacobiReport {
    assert!(up_to_arity >= 1);
    let basis = SymBasis::new(&l.complex.space, up_to_arity);
    let mut entries = Vec::new();
    for n in 1..=up_to_arity {
        if n == 1 {
            let ok = l.complex.verify();
            entries.push(JacobiEntry {
                arity: 1,
                ok,
                witness: None,
            });
            continue;
        }
        let mut witness = None;
        'monos: for g in basis.of_weight(n) {
            let mono = basis.mono(g).clone();
            let degs: Vec<Degree> = mono
                .iter()
                .map(|&x| basis.gen_degree(x as usize))
                .collect();
            let mut total: BTreeMap<(Degree, usize), Rat> = BTreeMap::new();
            for j in 1..=n {
                let i = n + 1 - j;
                if j >= 2 && l.brackets.get(&j).is_none() {
                    continue;
                }
                if i >= 2 && l.brackets.get(&i).is_none() {
                    continue;
                }
                for subset in combinations(n, j) {
                    let eps = extract_front_sign(&degs, &subset);
                    let inner_mono: Mono = subset.iter().map(|&s| mono[s]).collect();
                    let inner = l.eval_bracket(&basis, j, &inner_mono);
                    if inner.is_empty() {
                        continue;
                    }
                    let rest: Mono = (0..n)
                        .filter(|t| !subset.contains(t))
                        .map(|t| mono[t])
                        .collect();
                    for ((ydeg, yrow), cin) in &inner {
                        let ylabel = &l.complex.space.labels(*ydeg)[*yrow];
                        let ygen = basis
                            .gen_by_label(ylabel)
                            .expect("bracket values in the generator space");
                        let Some((outer_mono, merge_sign)) =
                            basis.mul_mono(&vec![ygen as u32], &rest)
                        else {
                            continue;
                        };
                        let outer = l.eval_bracket(&basis, i, &outer_mono);
                        for (coord, cout) in outer {
                            let c = Rat::from_integer((eps * merge_sign).into()) * cin * cout;
                            let cur = total.remove(&coord).unwrap_or_else(Rat::zero) + c;
                            if !cur.is_zero() {
                                total.insert(coord, cur);
                            }
                        }
                    }
                }
            }
            if !total.is_empty() {
                witness = Some(basis.label_of(g));
                break 'monos;
            }
        }
        entries.push(JacobiEntry {
            arity: n,
            ok: witness.is_none(),
            witness,
        });
    }
    JacobiReport { entries }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in start..n {
            cur.push(s);
            rec(s + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// A finite-dimensional Lie algebra over the rationals, by structure
/// constants. Brackets are stored for i < j; antisymmetry is built in.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    pub labels: Vec<String>,
    table: BTreeMap<(usize, usize), Vec<(usize, Rat)>>,
}

impl LieAlgebra {
    /// Entries are (i, j, k, c) meaning [b_i, b_j] contains c * b_k; either
    /// orientation may be given, antisymmetry fills in the rest. Set
    /// `validate` to check the Jacobi identity (negative-control models skip
    /// it on purpose).
    pub fn new(labels: Vec<String>, entries: &[(usize, usize, usize, Rat)], validate: bool) -> Self {
        let dim = labels.len();
        let mut table: BTreeMap<(usize, usize), Vec<(usize, Rat)>> = BTreeMap::new();
        let mut add = |i: usize, j: usize, k: usize, c: Rat| {
            assert!(i < dim && j < dim && k < dim);
            let row = table.entry((i, j)).or_default();
            match row.iter_mut().find(|(kk, _)| *kk == k) {
                Some((_, v)) => *v += c,
                None => row.push((k, c)),
            }
        };
        for (i, j, k, c) in entries {
            assert_ne!(i, j, "diagonal bracket must vanish");
            if i < j {
                add(*i, *j, *k, c.clone());
            } else {
                add(*j, *i, *k, -c.clone());
            }
        }
        for row in table.values_mut() {
            row.retain(|(_, c)| !c.is_zero());
            row.sort_by_key(|(k, _)| *k);
        }
        table.retain(|_, row| !row.is_empty());
        let g = LieAlgebra { labels, table };
        if validate {
            assert!(g.check_jacobi(), "structure constants violate Jacobi");
        }
        g
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// [b_i, b_j] as coefficients.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<(usize, Rat)> {
        if i == j {
            return Vec::new();
        }
        if i < j {
            self.table.get(&(i, j)).cloned().unwrap_or_default()
        } else {
            self.table
                .get(&(j, i))
                .map(|row| row.iter().map(|(k, c)| (*k, -c.clone())).collect())
                .unwrap_or_default()
        }
    }

    /// Bracket of two coefficient vectors.
    pub fn bracket_vec(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim()];
        for i in 0..self.dim() {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim() {
                if y[j].is_zero() {
                    continue;
                }
                for (k, c) in self.bracket(i, j) {
                    out[k] += &x[i] * &y[j] * c;
                }
            }
        }
        out
    }

    pub fn check_jacobi(&self) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let mut total = vec![Rat::zero(); n];
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (m, cm) in self.bracket(a, b) {
                            for (l, cl) in self.bracket(m, c) {
                                total[l] += &cm * &cl;
                            }
                        }
                    }
                    if total.iter().any(|v| !v.is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Basis e, f, h with [h,e] = 2e, [h,f] = -2f, [e,f] = h.
    pub fn sl2() -> Self {
        use crate::exactlin::rat_int;
        let labels = vec!["e".into(), "f".into(), "h".into()];
        // indices: e=0, f=1, h=2
        LieAlgebra::new(
            labels,
            &[
                (2, 0, 0, rat_int(2)),
                (2, 1, 1, rat_int(-2)),
                (0, 1, 2, rat_int(1)),
            ],
            true,
        )
    }

    /// sl2 with one structure constant mutated ([h,e] = 3e), breaking Jacobi.
    /// Built without validation; negative-control models use it.
    pub fn sl2_mutated() -> Self {
        use crate::exactlin::rat_int;
        let labels = vec!["e".into(), "f".into(), "h".into()];
        LieAlgebra::new(
            labels,
            &[
                (2, 0, 0, rat_int(3)),
                (2, 1, 1, rat_int(-2)),
                (0, 1, 2, rat_int(1)),
            ],
            false,
        )
    }

    pub fn abelian(n: usize) -> Self {
        let labels = (0..n).map(|i| alloc::format!("t{i}")).collect();
        LieAlgebra::new(labels, &[], true)
    }
}

/// The degree +1 bracket of the [1]-shifted Lie structure on a two-term
/// complex concentrated in degrees -1 and 0, both carrying the Lie algebra's
/// basis (matched by position).
///
/// On two ghosts (degree -1) the value is -[.,.]; on a ghost and a field the
/// value on the canonical monomial c_i * A_j is -[b_i, b_j]; the (0,0)
/// component is zero (minimal model). Callers wanting a nonzero field-field
/// component can set that block on the returned map.
pub fn shifted_lie_bracket(g: &LieAlgebra, complex: &CochainComplex) -> GradedMap {
    let sp = &complex.space;
    assert_eq!(sp.dim(-1), g.dim(), "ghost component must carry the Lie basis");
    assert_eq!(sp.dim(0), g.dim(), "field component must carry the Lie basis");
    let basis = SymBasis::new(sp, 2);
    let w2 = basis.weight_space(2);
    let mut out = GradedMap::zero(&w2, sp, 1);
    for gmono in basis.of_weight(2) {
        let m = basis.mono(gmono);
        let (g1, g2) = (m[0] as usize, m[1] as usize);
        let (d1, d2) = (basis.gen_degree(g1), basis.gen_degree(g2));
        let col = basis.weight_position(gmono);
        let src_deg = d1 + d2;
        // positions of the letters in the complex's own basis order
        let lie_index = |gen: usize, deg: Degree| {
            sp.index_of(deg, basis.gen_label(gen))
                .expect("letter in complex basis")
        };
        let (target_deg, i, j) = match (d1, d2) {
            (-1, -1) => (-1, lie_index(g1, -1), lie_index(g2, -1)),
            (-1, 0) => (0, lie_index(g1, -1), lie_index(g2, 0)),
            _ => continue,
        };
        for (k, c) in g.bracket(i, j) {
            out.add_to_block(src_deg, k, col, &-(c));
        }
        let _ = target_deg;
    }
    out
}

/// Pull a minimal strict Lie structure back through a retract to its big
/// complex: the arity-2 bracket becomes i ∘ l2 ∘ Sym²(p), every higher
/// bracket stays zero. The result is a strict dgla on `r.big` (an inflated
/// model); the homotopy Jacobi identities are re-verified.
pub fn dgla_from_retract(
    r: &DeformationRetract,
    l2_small: &GradedMap,
) -> Result<LInftyStructure, RetractError> {
    if !r.small.differential.is_zero() || !r.verify().core_ok() {
        return Err(RetractError::RetractInvariantsFailed);
    }
    let big_basis = SymBasis::new(&r.big.space, 2);
    let small_basis = SymBasis::new(&r.small.space, 2);
    // generator images under p, as weight-1 elements of the small basis
    let p_images: Vec<Elt> = (0..big_basis.num_gens())
        .map(|gen| {
            let gdeg = big_basis.gen_degree(gen);
            let col = r
                .big
                .space
                .index_of(gdeg, big_basis.gen_label(gen))
                .expect("generator in big space");
            let block = r.p.block(gdeg);
            let mut e: Elt = BTreeMap::new();
            for row in 0..block.rows {
                let v = block.get(row, col);
                if !v.is_zero() {
                    let label = &r.small.space.labels(gdeg)[row];
                    let sgen = small_basis.gen_by_label(label).expect("small generator");
                    add_term(&mut e, small_basis.lookup(&vec![sgen as u32]).unwrap(), v);
                }
            }
            e
        })
        .collect();
    let (sym_p, overflow) = big_basis.extend_multiplicative(&p_images, &small_basis);
    debug_assert!(overflow.is_empty());
    let sym_p2 = restrict_to_weight(&sym_p, &big_basis, &small_basis, 2);
    let l2_big = r.i.compose(&l2_small.compose(&sym_p2));
    let out = LInftyStructure::strict_dgla(r.big.clone(), l2_big);
    let report = check_jacobi(&out, 3);
    if !report.passed() {
        return Err(RetractError::RetractInvariantsFailed);
    }
    Ok(out)
}

/// Restrict a weight-preserving map between symmetric bases to one exact
/// weight on both sides.
pub fn restrict_to_weight(
    map: &GradedMap,
    src: &SymBasis,
    tgt: &SymBasis,
    w: usize,
) -> GradedMap {
    assert_eq!(map.shift, 0, "weight restriction expects degree 0 maps");
    let src_w = src.weight_space(w);
    let tgt_w = tgt.weight_space(w);
    let mut out = GradedMap::zero(&src_w, &tgt_w, 0);
    for g in src.of_weight(w) {
        let (deg, pos) = src.position(g);
        let block = map.block(deg);
        if block.is_zero() {
            continue;
        }
        let col = src.weight_position(g);
        for row in 0..block.rows {
            let v = block.get(row, pos);
            if v.is_zero() {
                continue;
            }
            let tg = tgt.global_at(deg, row);
            assert_eq!(tgt.weight(tg), w, "map does not preserve weight");
            out.add_to_block(deg, tgt.weight_position(tg), col, &v);
        }
    }
    out
}

/// Build a graded map on a weight space from monomial-indexed entries: for
/// each weight-w source monomial, a list of (target degree, target row, c).
pub fn bracket_from_entries(
    basis: &SymBasis,
    target: &crate::exactlin::GradedVectorSpace,
    w: usize,
    entries: impl Fn(&Mono) -> Vec<(usize, Rat)>,
) -> GradedMap {
    let w_space = basis.weight_space(w);
    let mut out = GradedMap::zero(&w_space, target, 1);
    for g in basis.of_weight(w) {
        let (deg, _) = basis.position(g);
        let col = basis.weight_position(g);
        for (row, c) in entries(basis.mono(g)) {
            out.add_to_block(deg, row, col, &c);
        }
    }
    out
}

/// Helper shared by tests and models: dense block setter.
pub fn dense_block(rows: usize, cols: usize, vals: &[Rat]) -> SparseMat {
    assert_eq!(vals.len(), rows * cols);
    let mut m = SparseMat::zero(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, vals[r * cols + c].clone());
        }
    }
    m
}
