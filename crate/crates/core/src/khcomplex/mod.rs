//! The bigraded integral Khovanov complex of an oriented link diagram.
//!
//! Generators are pairs `(state, labeling)`: a vertex of the cube of
//! smoothings together with a label in `{1, X}` for every circle. Edge maps
//! multiply on merges and comultiply on splits; the edge flipping crossing `k`
//! carries the sign `(-1)^(number of 1-bits below k)`.

mod frobenius;
mod oracle;
mod poly;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::ops::Range;

use num_bigint::BigInt;
use thiserror::Error;

pub use frobenius::{comultiply, counit, multiply, unit, Label};
pub use oracle::kauffman_oracle;
pub use poly::LaurentPoly;

use crate::intlinalg::{homology_at, AbelianGroup, IntMatrix, LinAlgError};
use crate::pdcode::{Crossing, LinkDiagram, Smoothing};
use crate::sparse::{add_entry, SparseMatrix, SparseVec};

pub const DEFAULT_MAX_CROSSINGS: usize = 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KhError {
    #[error("diagram has {crossings} crossings, budget is {budget}")]
    ResourceLimit { crossings: usize, budget: usize },
    #[error("crossing {crossing} neither merges nor splits at state {state:#b}; the PD code is not planar")]
    NonPlanar { state: u64, crossing: usize },
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// `(homological degree i, quantum degree j)`
pub type Bidegree = (i64, i64);

/// A cube vertex with one label per circle; bit `c` of `labels` is set when
/// circle `c` (ordered by smallest edge) carries `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KhGen {
    pub state: u64,
    pub labels: u64,
}

impl KhGen {
    pub fn label(&self, circle: usize) -> Label {
        Label::from_bit(self.labels >> circle & 1 == 1)
    }

    pub fn with_label(self, circle: usize, l: Label) -> KhGen {
        let labels = (self.labels & !(1 << circle)) | ((l.bit() as u64) << circle);
        KhGen { labels, ..self }
    }
}

#[derive(Clone, Debug)]
pub struct KhComplex {
    diagram: LinkDiagram,
    smoothings: Vec<Smoothing>,
    gens: Vec<KhGen>,
    degrees: Vec<Bidegree>,
    index: HashMap<KhGen, usize>,
    groups: BTreeMap<Bidegree, Range<usize>>,
    diff: SparseMatrix,
}

pub fn build_complex(d: &LinkDiagram) -> Result<KhComplex, KhError> {
    KhComplex::build(d, DEFAULT_MAX_CROSSINGS)
}

impl KhComplex {
    pub fn build(d: &LinkDiagram, max_crossings: usize) -> Result<Self, KhError> {
        let n = d.crossing_count();
        if n > max_crossings || n >= 63 {
            return Err(KhError::ResourceLimit { crossings: n, budget: max_crossings });
        }
        let (n_plus, n_minus) = d.writhe_counts();
        let smoothings: Vec<Smoothing> = (0..1u64 << n).map(|s| d.smooth(s)).collect();

        let mut keyed = Vec::new();
        for (state, sm) in smoothings.iter().enumerate() {
            let state = state as u64;
            let c = sm.count();
            let ones = state.count_ones() as i64;
            for labels in 0..1u64 << c {
                let xs = labels.count_ones() as i64;
                let i = ones - n_minus as i64;
                let j = (c as i64 - 2 * xs) + ones + n_plus as i64 - 2 * n_minus as i64;
                let g = KhGen { state, labels };
                keyed.push(((i, j), lex_key(state, n), lex_key(labels, c), g));
            }
        }
        keyed.sort();

        let mut gens = Vec::with_capacity(keyed.len());
        let mut degrees = Vec::with_capacity(keyed.len());
        let mut groups: BTreeMap<Bidegree, Range<usize>> = BTreeMap::new();
        for (k, (deg, _, _, g)) in keyed.into_iter().enumerate() {
            gens.push(g);
            degrees.push(deg);
            groups.entry(deg).or_insert(k..k).end = k + 1;
        }
        let index: HashMap<KhGen, usize> = gens.iter().enumerate().map(|(k, &g)| (g, k)).collect();

        let mut cplx =
            KhComplex { diagram: d.clone(), smoothings, gens, degrees, index, groups, diff: SparseMatrix::zeros(0, 0) };
        let mut cols = Vec::with_capacity(cplx.gens.len());
        for &g in &cplx.gens {
            let mut col = SparseVec::new();
            for k in 0..n {
                if g.state >> k & 1 == 1 {
                    continue;
                }
                let sign: i64 = if (g.state & ((1 << k) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
                for (h, c) in cplx.edge_map(g, k)? {
                    add_entry(&mut col, cplx.index[&h], BigInt::from(sign * c));
                }
            }
            cols.push(col);
        }
        cplx.diff = SparseMatrix::from_columns(cplx.gens.len(), cols);
        Ok(cplx)
    }

    /// Unsigned edge map of the cube along crossing `k` (which must be 0 in `g`).
    fn edge_map(&self, g: KhGen, k: usize) -> Result<Vec<(KhGen, i64)>, KhError> {
        let x: &Crossing = &self.diagram.crossings()[k];
        let [a, b, c, _] = x.slots;
        let src = &self.smoothings[g.state as usize];
        let tstate = g.state | 1 << k;
        let tgt = &self.smoothings[tstate as usize];
        let ca = src.circle_of(a).unwrap();
        let cc = src.circle_of(c).unwrap();
        let tp = tgt.circle_of(a).unwrap();
        let tq = tgt.circle_of(b).unwrap();

        let mut base = 0u64;
        for (i, circ) in src.circles().iter().enumerate() {
            if i == ca || i == cc {
                continue;
            }
            if g.labels >> i & 1 == 1 {
                base |= 1 << tgt.circle_of(circ[0]).unwrap();
            }
        }
        let mk = |extra: &[(usize, Label)]| {
            let mut labels = base;
            for &(circle, l) in extra {
                if l.bit() {
                    labels |= 1 << circle;
                }
            }
            KhGen { state: tstate, labels }
        };
        match (ca != cc, tp == tq) {
            (true, true) => Ok(multiply(g.label(ca), g.label(cc)).map(|l| (mk(&[(tp, l)]), 1)).into_iter().collect()),
            (false, false) => {
                Ok(comultiply(g.label(ca)).into_iter().map(|(l1, l2)| (mk(&[(tp, l1), (tq, l2)]), 1)).collect())
            }
            _ => Err(KhError::NonPlanar { state: g.state, crossing: k }),
        }
    }

    pub fn diagram(&self) -> &LinkDiagram {
        &self.diagram
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[KhGen] {
        &self.gens
    }

    pub fn generator(&self, k: usize) -> KhGen {
        self.gens[k]
    }

    pub fn index_of(&self, g: &KhGen) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn bidegree_of(&self, k: usize) -> Bidegree {
        self.degrees[k]
    }

    pub fn smoothing(&self, state: u64) -> &Smoothing {
        &self.smoothings[state as usize]
    }

    pub fn labels_of(&self, g: KhGen) -> Vec<Label> {
        (0..self.smoothing(g.state).count()).map(|c| g.label(c)).collect()
    }

    /// Index ranges of the nonzero groups, keyed by bidegree.
    pub fn groups(&self) -> &BTreeMap<Bidegree, Range<usize>> {
        &self.groups
    }

    pub fn group_range(&self, deg: Bidegree) -> Range<usize> {
        self.groups.get(&deg).cloned().unwrap_or(0..0)
    }

    pub fn group(&self, deg: Bidegree) -> &[KhGen] {
        &self.gens[self.group_range(deg)]
    }

    pub fn rank(&self, deg: Bidegree) -> usize {
        self.group_range(deg).len()
    }

    /// The full differential on the global generator basis.
    pub fn differential_sparse(&self) -> &SparseMatrix {
        &self.diff
    }

    /// The block from `(i, j)` to `(i + 1, j)`.
    pub fn differential(&self, (i, j): Bidegree) -> IntMatrix {
        self.diff.block(self.group_range((i + 1, j)), self.group_range((i, j)))
    }

    /// Checks `d o d = 0` and that every entry preserves `j` and raises `i` by one.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (k, col) in self.diff.columns().iter().enumerate() {
            let (i, j) = self.degrees[k];
            for &t in col.keys() {
                if self.degrees[t] != (i + 1, j) {
                    return Err(format!("entry {k} -> {t} maps {:?} to {:?}", self.degrees[k], self.degrees[t]));
                }
            }
        }
        let dd = self.diff.compose(&self.diff);
        if let Some((k, _)) = dd.columns().iter().enumerate().find(|(_, c)| !c.is_empty()) {
            return Err(format!("d o d is nonzero on generator {k} at bidegree {:?}", self.degrees[k]));
        }
        Ok(())
    }

    pub fn graded_euler_characteristic(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (&(i, j), r) in &self.groups {
            let c = r.len() as i64;
            p.add_term(j, BigInt::from(if i % 2 == 0 { c } else { -c }));
        }
        p
    }

    pub fn homology(&self) -> Result<HomologyTable, KhError> {
        let mut out = BTreeMap::new();
        for &(i, j) in self.groups.keys() {
            let h = homology_at(&self.differential((i - 1, j)), &self.differential((i, j)))?;
            if !h.is_zero() {
                out.insert((i, j), h);
            }
        }
        Ok(HomologyTable(out))
    }
}

pub fn graded_euler_characteristic(c: &KhComplex) -> LaurentPoly {
    c.graded_euler_characteristic()
}

pub fn homology(c: &KhComplex) -> Result<HomologyTable, KhError> {
    c.homology()
}

/// Lexicographic key with bit 0 as the most significant position.
fn lex_key(bits: u64, width: usize) -> u64 {
    if width == 0 {
        0
    } else {
        bits.reverse_bits() >> (64 - width)
    }
}

/// Nonzero homology groups by bidegree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HomologyTable(pub BTreeMap<Bidegree, AbelianGroup>);

impl HomologyTable {
    pub fn get(&self, deg: Bidegree) -> AbelianGroup {
        self.0.get(&deg).cloned().unwrap_or_default()
    }

    pub fn total_free_rank(&self) -> usize {
        self.0.values().map(|g| g.free_rank).sum()
    }

    /// Poincare polynomial evaluated at `t = -1`, from the free ranks.
    pub fn euler_characteristic(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (&(i, j), g) in &self.0 {
            let r = g.free_rank as i64;
            p.add_term(j, BigInt::from(if i % 2 == 0 { r } else { -r }));
        }
        p
    }

    /// Free ranks only, for comparing diagrams of the same link.
    pub fn free_ranks(&self) -> BTreeMap<Bidegree, usize> {
        self.0.iter().filter(|(_, g)| g.free_rank > 0).map(|(&d, g)| (d, g.free_rank)).collect()
    }

    /// One row per nonzero group: `i j free torsion`. The machine form is
    /// tab-separated with comma-joined torsion; the text form is aligned.
    pub fn render(&self, machine: bool) -> String {
        let mut out = String::new();
        if !machine {
            out.push_str("   i    j  free  torsion\n");
        }
        for (&(i, j), g) in &self.0 {
            let tors: Vec<String> = g.torsion.iter().map(ToString::to_string).collect();
            if machine {
                let _ = writeln!(out, "{i}\t{j}\t{}\t{}", g.free_rank, tors.join(","));
            } else {
                let t = if tors.is_empty() { "-".to_string() } else { tors.join(",") };
                let _ = writeln!(out, "{i:>4} {j:>4} {:>5}  {t}", g.free_rank);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdcode::parse_pd;

    fn pd(s: &str) -> LinkDiagram {
        parse_pd(s).unwrap()
    }

    const HOPF: &str = "X[1,3,2,4] X[3,1,4,2]";
    const TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";

    #[test]
    fn empty_diagram() {
        let c = build_complex(&LinkDiagram::empty()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.rank((0, 0)), 1);
        assert_eq!(c.graded_euler_characteristic(), LaurentPoly::one());
        let h = c.homology().unwrap();
        assert_eq!(h.0.len(), 1);
        assert_eq!(h.get((0, 0)), AbelianGroup::free(1));
    }

    #[test]
    fn unknot() {
        let c = build_complex(&pd("O")).unwrap();
        assert_eq!(c.groups().len(), 2);
        assert_eq!(c.rank((0, 1)), 1);
        assert_eq!(c.rank((0, -1)), 1);
        assert_eq!(c.graded_euler_characteristic().to_string(), "q^-1 + q");
        let h = c.homology().unwrap();
        assert_eq!(h.free_ranks(), BTreeMap::from([((0, -1), 1), ((0, 1), 1)]));
    }

    #[test]
    fn hopf_ranks() {
        let c = build_complex(&pd(HOPF)).unwrap();
        assert_eq!(c.len(), 12);
        let per_state: Vec<usize> = (0..4u64).map(|s| c.generators().iter().filter(|g| g.state == s).count()).collect();
        assert_eq!(per_state, vec![4, 2, 2, 4]);
        c.check_invariants().unwrap();
        let h = c.homology().unwrap();
        assert_eq!(h.total_free_rank(), 4);
        let degs: std::collections::BTreeSet<i64> = h.0.keys().map(|&(i, _)| i).collect();
        assert_eq!(degs.len(), 2);
        // positive Hopf link: Z at (0,0), (0,2), (2,4), (2,6)
        assert_eq!(h.free_ranks(), BTreeMap::from([((0, 0), 1), ((0, 2), 1), ((2, 4), 1), ((2, 6), 1)]));
    }

    #[test]
    fn left_trefoil_homology() {
        let c = build_complex(&pd(TREFOIL)).unwrap();
        c.check_invariants().unwrap();
        let h = c.homology().unwrap();
        let two = AbelianGroup { free_rank: 0, torsion: vec![BigInt::from(2)] };
        assert_eq!(h.get((0, -1)), AbelianGroup::free(1));
        assert_eq!(h.get((0, -3)), AbelianGroup::free(1));
        assert_eq!(h.get((-2, -5)), AbelianGroup::free(1));
        assert_eq!(h.get((-3, -9)), AbelianGroup::free(1));
        assert_eq!(h.get((-2, -7)), two);
        assert_eq!(h.0.len(), 5);
        assert_eq!(c.graded_euler_characteristic().to_string(), "-q^-9 + q^-5 + q^-3 + q^-1");
    }

    #[test]
    fn euler_matches_oracle_small() {
        for s in ["", "O", "O O", HOPF, TREFOIL, "X[1,1,2,2]"] {
            let d = pd(s);
            let c = build_complex(&d).unwrap();
            assert_eq!(c.graded_euler_characteristic(), kauffman_oracle(&d, 10).unwrap(), "{s}");
            assert_eq!(c.homology().unwrap().euler_characteristic(), c.graded_euler_characteristic());
        }
    }

    #[test]
    fn ordering_within_group() {
        let c = build_complex(&pd(HOPF)).unwrap();
        for r in c.groups().values() {
            let keys: Vec<_> = c.gens[r.clone()]
                .iter()
                .map(|g| (lex_key(g.state, 2), lex_key(g.labels, c.smoothing(g.state).count())))
                .collect();
            assert!(keys.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn resource_limit() {
        let d = pd(TREFOIL);
        assert_eq!(KhComplex::build(&d, 2).unwrap_err(), KhError::ResourceLimit { crossings: 3, budget: 2 });
        assert!(kauffman_oracle(&d, 2).is_err());
    }

    #[test]
    fn table_render() {
        let h = build_complex(&pd(TREFOIL)).unwrap().homology().unwrap();
        let m = h.render(true);
        assert!(m.contains("-2\t-7\t0\t2\n"));
        assert!(h.render(false).starts_with("   i    j  free  torsion\n"));
    }
}
