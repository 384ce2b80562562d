//! Law suites for the subcomplex lattice: Δ-subtraction, the vertex hull 𝒢,
//! fatness, ordered products and barycentric subdivision.
//!
//! The exhaustive pass runs over every subcomplex of Δ³ (167 of them, ∅ included)
//! through lookup tables filled by the library operations. The random pass
//! draws 3- and 4-dimensional ambients from a seeded ChaCha stream.

use crate::error::Result;
use crate::scx::{boundary_of_simplex, product, simplex, Complex, SimplicialMap, Subcomplex, VertexId};
use crate::subdivision::{subdivide, SdComplex};
use fixedbitset::FixedBitSet;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct LawConfig {
    pub seed: u64,
    /// Random 4-dimensional ambients.
    pub random_instances: usize,
    pub exhaustive: bool,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig { seed: 0x5eed_2024, random_instances: 10_000, exhaustive: true }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LawTally {
    pub law: String,
    pub checked: u64,
    pub failures: u64,
    /// Smallest failing instance seen.
    pub witness: Option<String>,
}

/// A known failure of a set-theoretic law for Δ-subtraction or 𝒢.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub name: String,
    pub instance: String,
    pub holds: String,
    pub fails: String,
    /// The weaker inclusion holds and the stronger one fails, as expected.
    pub reproduced: bool,
    /// Whether the failing law holds on the same instance after one subdivision.
    pub repaired_after_sd: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub seed: u64,
    pub random_instances: usize,
    pub exhaustive: bool,
    pub laws: Vec<LawTally>,
    pub counterexamples: Vec<Counterexample>,
}

impl LawReport {
    pub fn pass(&self) -> bool {
        self.laws.iter().all(|l| l.failures == 0 && l.checked > 0)
            && self.counterexamples.iter().all(|c| c.reproduced && c.repaired_after_sd != Some(false))
    }

    pub fn failing(&self) -> Vec<&LawTally> {
        self.laws.iter().filter(|l| l.failures > 0 || l.checked == 0).collect()
    }

    pub fn total_checks(&self) -> u64 {
        self.laws.iter().map(|l| l.checked).sum()
    }
}

pub fn run_laws(cfg: &LawConfig) -> Result<LawReport> {
    let mut t = Tally::new();
    if cfg.exhaustive {
        exhaustive(&mut t)?;
    }
    // every instance gets a 4-dimensional ambient; every fourth a 3-dimensional one too
    for i in 0..cfg.random_instances {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add((i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)));
        random_instance(&mut t, &mut rng, 4)?;
        if i % 4 == 3 {
            random_instance(&mut t, &mut rng, 3)?;
        }
    }
    Ok(LawReport {
        seed: cfg.seed,
        random_instances: cfg.random_instances,
        exhaustive: cfg.exhaustive,
        laws: t.finish(),
        counterexamples: counterexamples()?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Law {
    Closure,
    SubLargest,
    SubUnits,
    SubAntitone,
    SubRelative,
    SubMorganJoin,
    SubMorganMeet,
    SubDoubleLower,
    SubInvolutionLower,
    SubContained,
    SubIterate,
    SubAbsorb,
    SubMeetDistrib,
    SubJoinLeft,
    SubMeetLeft,
    SubMeetTrim,
    SubSwap,
    HullVertices,
    HullInjective,
    HullMonotone,
    HullCover,
    HullMeet,
    HullJoin,
    HullImage,
    HullPreimage,
    HullProduct,
    HullDifference,
    FatSimplex,
    FatMeet,
    ProductDim,
    SdInjective,
    SdMonotone,
    SdJoin,
    SdMeet,
    SdTop,
    SdFat,
    SdSubtract,
    SdDoubleComplement,
    SdEmptyDifference,
    SdMorgan,
}

const ALL: [Law; 40] = [
    Law::Closure,
    Law::SubLargest,
    Law::SubUnits,
    Law::SubAntitone,
    Law::SubRelative,
    Law::SubMorganJoin,
    Law::SubMorganMeet,
    Law::SubDoubleLower,
    Law::SubInvolutionLower,
    Law::SubContained,
    Law::SubIterate,
    Law::SubAbsorb,
    Law::SubMeetDistrib,
    Law::SubJoinLeft,
    Law::SubMeetLeft,
    Law::SubMeetTrim,
    Law::SubSwap,
    Law::HullVertices,
    Law::HullInjective,
    Law::HullMonotone,
    Law::HullCover,
    Law::HullMeet,
    Law::HullJoin,
    Law::HullImage,
    Law::HullPreimage,
    Law::HullProduct,
    Law::HullDifference,
    Law::FatSimplex,
    Law::FatMeet,
    Law::ProductDim,
    Law::SdInjective,
    Law::SdMonotone,
    Law::SdJoin,
    Law::SdMeet,
    Law::SdTop,
    Law::SdFat,
    Law::SdSubtract,
    Law::SdDoubleComplement,
    Law::SdEmptyDifference,
    Law::SdMorgan,
];

impl Law {
    fn name(self) -> &'static str {
        use Law::*;
        match self {
            Closure => "every lattice operation returns a face-closed set",
            SubLargest => "Y −Δ Z is the largest subcomplex inside Y − Z",
            SubUnits => "Y −Δ ∅ = Y and Y −Δ Y = ∅",
            SubAntitone => "Z ≤ Z' ⇒ Y −Δ Z' ≤ Y −Δ Z",
            SubRelative => "Y −Δ Z = Y ∩ (X −Δ Z)",
            SubMorganJoin => "X −Δ (Y ∪ Z) = (X −Δ Y) ∩ (X −Δ Z)",
            SubMorganMeet => "(X −Δ Y) ∪ (X −Δ Z) ≤ X −Δ (Y ∩ Z)",
            SubDoubleLower => "Z −Δ Y ≤ (X −Δ Y) −Δ (X −Δ Z)",
            SubInvolutionLower => "Z ≤ X −Δ (X −Δ Z)",
            SubContained => "Y ≤ Z ⇒ Y −Δ Z = ∅",
            SubIterate => "Z' ≤ Z ⇒ Y −Δ Z = (Y −Δ Z') −Δ Z",
            SubAbsorb => "(X −Δ Y) −Δ Z = X −Δ (Y ∪ Z)",
            SubMeetDistrib => "Y ∩ (Z −Δ Z') = (Y ∩ Z) −Δ (Y ∩ Z')",
            SubJoinLeft => "(Z ∪ Z') −Δ Y = (Z −Δ Y) ∪ (Z' −Δ Y)",
            SubMeetLeft => "(Z ∩ Z') −Δ Y = (Z −Δ Y) ∩ (Z' −Δ Y)",
            SubMeetTrim => "Y −Δ (Y ∩ Z) = Y −Δ Z = (Y ∪ Z) −Δ Z",
            SubSwap => "(Y −Δ Y') ∩ (Z −Δ Z') = (Z −Δ Y') ∩ (Y −Δ Z')",
            HullVertices => "V(𝒢(A)) = A",
            HullInjective => "A = B ⇔ 𝒢(A) = 𝒢(B)",
            HullMonotone => "A ⊆ B ⇒ 𝒢(A) ≤ 𝒢(B)",
            HullCover => "Z ≤ 𝒢(V(Z))",
            HullMeet => "⋂ 𝒢(Aᵢ) = 𝒢(⋂ Aᵢ)",
            HullJoin => "⋃ 𝒢(Aᵢ) ≤ 𝒢(⋃ Aᵢ)",
            HullImage => "f(𝒢(A)) ≤ 𝒢(f(A))",
            HullPreimage => "𝒢(f⁻¹(A)) = f⁻¹(𝒢(A))",
            HullProduct => "𝒢(A × B) = 𝒢(A) × 𝒢(B)",
            HullDifference => "𝒢(A − B) = 𝒢(A) −Δ 𝒢(B)",
            FatSimplex => "Im(σ) = 𝒢(σ) is fat",
            FatMeet => "Z fat ⇒ Z ∩ Im(σ) = Im(τ) for a face τ of σ",
            ProductDim => "dim(K × L) = dim K + dim L",
            SdInjective => "Y = Z ⇔ Sd(Y) = Sd(Z)",
            SdMonotone => "Y ≤ Z ⇒ Sd(Y) ≤ Sd(Z)",
            SdJoin => "Sd(⋃ Yᵢ) = ⋃ Sd(Yᵢ)",
            SdMeet => "Sd(⋂ Yᵢ) = ⋂ Sd(Yᵢ)",
            SdTop => "a chain lies in Sd(Z) iff its top lies in Z",
            SdFat => "Sd(Z) = 𝒢(Z) is fat",
            SdSubtract => "a chain lies in Sd(Y) −Δ Sd(Z) iff every entry lies in Y − Z",
            SdDoubleComplement => "Sd X −Δ (Sd X −Δ Sd Z) ≤ Sd Z",
            SdEmptyDifference => "Sd Y −Δ Sd Z = ∅ ⇒ Sd Y ≤ Sd Z",
            SdMorgan => "Sd X −Δ (Sd Y ∩ Sd Z) ≤ (Sd X −Δ Sd Y) ∪ (Sd X −Δ Sd Z)",
        }
    }
}

#[derive(Default)]
struct Row {
    checked: u64,
    failures: u64,
    witness: Option<String>,
}

struct Tally {
    rows: Vec<Row>,
}

impl Tally {
    fn new() -> Tally {
        Tally { rows: ALL.iter().map(|_| Row::default()).collect() }
    }

    #[inline]
    fn check(&mut self, law: Law, ok: bool, witness: impl FnOnce() -> String) {
        let r = &mut self.rows[law as usize];
        r.checked += 1;
        if !ok {
            r.failures += 1;
            let w = witness();
            if r.witness.as_ref().is_none_or(|old| w.len() < old.len()) {
                r.witness = Some(w);
            }
        }
    }

    fn finish(self) -> Vec<LawTally> {
        ALL.iter()
            .zip(self.rows)
            .map(|(l, r)| LawTally { law: l.name().to_string(), checked: r.checked, failures: r.failures, witness: r.witness })
            .collect()
    }
}

/// Maximal simplices, by label.
pub fn describe(z: &Subcomplex) -> String {
    let k = z.ambient();
    let tops: Vec<String> = z
        .indices()
        .filter(|&i| k.cofaces(i).iter().all(|&c| !z.contains(c as usize)))
        .map(|i| k.simplex_label(i))
        .collect();
    if tops.is_empty() {
        "∅".into()
    } else {
        tops.join(" ")
    }
}

/// The lattice operations the subtraction laws are phrased in.
trait Lattice {
    type S: Clone + PartialEq;
    fn join(&self, a: &Self::S, b: &Self::S) -> Self::S;
    fn meet(&self, a: &Self::S, b: &Self::S) -> Self::S;
    fn minus(&self, a: &Self::S, b: &Self::S) -> Self::S;
    fn le(&self, a: &Self::S, b: &Self::S) -> bool;
    fn is_empty(&self, a: &Self::S) -> bool;
    fn show(&self, a: &Self::S) -> String;
}

struct Direct;

impl Lattice for Direct {
    type S = Subcomplex;

    fn join(&self, a: &Subcomplex, b: &Subcomplex) -> Subcomplex {
        a.union(b).expect("same ambient")
    }

    fn meet(&self, a: &Subcomplex, b: &Subcomplex) -> Subcomplex {
        a.intersection(b).expect("same ambient")
    }

    fn minus(&self, a: &Subcomplex, b: &Subcomplex) -> Subcomplex {
        a.delta_subtract(b).expect("same ambient")
    }

    fn le(&self, a: &Subcomplex, b: &Subcomplex) -> bool {
        a.is_subset(b).expect("same ambient")
    }

    fn is_empty(&self, a: &Subcomplex) -> bool {
        a.is_empty()
    }

    fn show(&self, a: &Subcomplex) -> String {
        describe(a)
    }
}

/// Every subcomplex of a small ambient, with the operations tabulated.
struct Table {
    subs: Vec<Subcomplex>,
    masks: Vec<u32>,
    n: usize,
    join: Vec<u16>,
    meet: Vec<u16>,
    minus: Vec<u16>,
    le: Vec<bool>,
    empty: u16,
}

fn mask_of(z: &Subcomplex) -> u32 {
    z.indices().fold(0, |m, i| m | (1 << i))
}

fn all_subcomplexes(k: &Arc<Complex>) -> Vec<Subcomplex> {
    assert!(k.len() <= 20, "ambient too large to enumerate");
    (0u32..1 << k.len())
        .filter_map(|m| {
            let mut bits = FixedBitSet::with_capacity(k.len());
            for i in (0..k.len()).filter(|i| m >> i & 1 == 1) {
                bits.insert(i);
            }
            Subcomplex::from_bits(k, bits).ok()
        })
        .collect()
}

impl Table {
    fn new(k: &Arc<Complex>, t: &mut Tally) -> Table {
        let subs = all_subcomplexes(k);
        let masks: Vec<u32> = subs.iter().map(mask_of).collect();
        let pos: HashMap<u32, u16> = masks.iter().enumerate().map(|(i, &m)| (m, i as u16)).collect();
        let n = subs.len();
        let empty = pos[&0];
        let mut join = vec![0u16; n * n];
        let mut meet = vec![0u16; n * n];
        let mut minus = vec![0u16; n * n];
        let mut le = vec![false; n * n];
        let find = |z: Subcomplex, t: &mut Tally| {
            let found = pos.get(&mask_of(&z)).copied();
            t.check(Law::Closure, found.is_some() && z.is_face_closed(), || format!("{z:?}"));
            found.unwrap_or(empty)
        };
        for a in 0..n {
            for b in 0..n {
                let (y, z) = (&subs[a], &subs[b]);
                join[a * n + b] = find(Direct.join(y, z), t);
                meet[a * n + b] = find(Direct.meet(y, z), t);
                minus[a * n + b] = find(Direct.minus(y, z), t);
                le[a * n + b] = Direct.le(y, z);
            }
        }
        Table { subs, masks, n, join, meet, minus, le, empty }
    }
}

impl Lattice for Table {
    type S = u16;

    #[inline]
    fn join(&self, a: &u16, b: &u16) -> u16 {
        self.join[*a as usize * self.n + *b as usize]
    }

    #[inline]
    fn meet(&self, a: &u16, b: &u16) -> u16 {
        self.meet[*a as usize * self.n + *b as usize]
    }

    #[inline]
    fn minus(&self, a: &u16, b: &u16) -> u16 {
        self.minus[*a as usize * self.n + *b as usize]
    }

    #[inline]
    fn le(&self, a: &u16, b: &u16) -> bool {
        self.le[*a as usize * self.n + *b as usize]
    }

    fn is_empty(&self, a: &u16) -> bool {
        *a == self.empty
    }

    fn show(&self, a: &u16) -> String {
        describe(&self.subs[*a as usize])
    }
}

/// Laws inside an ambient subcomplex `x` with y, z ≤ x.
fn ambient_laws<L: Lattice>(l: &L, t: &mut Tally, x: &L::S, y: &L::S, z: &L::S) {
    let w = || format!("X = {}, Y = {}, Z = {}", l.show(x), l.show(y), l.show(z));
    let xy = l.minus(x, y);
    let xz = l.minus(x, z);
    t.check(Law::SubRelative, l.minus(y, z) == l.meet(y, &xz), w);
    t.check(Law::SubMorganJoin, l.minus(x, &l.join(y, z)) == l.meet(&xy, &xz), w);
    t.check(Law::SubMorganMeet, l.le(&l.join(&xy, &xz), &l.minus(x, &l.meet(y, z))), w);
    t.check(Law::SubDoubleLower, l.le(&l.minus(z, y), &l.minus(&xy, &xz)), w);
    t.check(Law::SubInvolutionLower, l.le(z, &l.minus(x, &xz)), w);
    t.check(Law::SubAbsorb, l.minus(&xy, z) == l.minus(x, &l.join(y, z)), w);
}

fn pair_laws<L: Lattice>(l: &L, t: &mut Tally, y: &L::S, z: &L::S) {
    let w = || format!("Y = {}, Z = {}", l.show(y), l.show(z));
    let yy = l.minus(y, y);
    t.check(Law::SubUnits, l.is_empty(&yy) && l.minus(y, &yy) == *y, w);
    let yz = l.minus(y, z);
    t.check(Law::SubContained, !l.le(y, z) || l.is_empty(&yz), w);
    t.check(Law::SubMeetTrim, l.minus(y, &l.meet(y, z)) == yz && l.minus(&l.join(y, z), z) == yz, w);
}

fn triple_laws<L: Lattice>(l: &L, t: &mut Tally, y: &L::S, z: &L::S, z2: &L::S) {
    let w = || format!("Y = {}, Z = {}, Z' = {}", l.show(y), l.show(z), l.show(z2));
    let yz = l.minus(y, z);
    let yz2 = l.minus(y, z2);
    t.check(Law::SubAntitone, !l.le(z, z2) || l.le(&yz2, &yz), w);
    t.check(Law::SubIterate, !l.le(z2, z) || yz == l.minus(&yz2, z), w);
    t.check(Law::SubMeetDistrib, l.meet(y, &l.minus(z, z2)) == l.minus(&l.meet(y, z), &l.meet(y, z2)), w);
    let zy = l.minus(z, y);
    let z2y = l.minus(z2, y);
    t.check(Law::SubJoinLeft, l.minus(&l.join(z, z2), y) == l.join(&zy, &z2y), w);
    t.check(Law::SubMeetLeft, l.minus(&l.meet(z, z2), y) == l.meet(&zy, &z2y), w);
}

#[inline]
fn swap_law<L: Lattice>(l: &L, t: &mut Tally, y: &L::S, y2: &L::S, z: &L::S, z2: &L::S) {
    let lhs = l.meet(&l.minus(y, y2), &l.minus(z, z2));
    let rhs = l.meet(&l.minus(z, y2), &l.minus(y, z2));
    t.check(Law::SubSwap, lhs == rhs, || {
        format!("Y = {}, Y' = {}, Z = {}, Z' = {}", l.show(y), l.show(y2), l.show(z), l.show(z2))
    });
}

/// Greatest face-closed subset of Y − Z, by peeling simplices with a missing face.
fn largest_inside(y: &Subcomplex, z: &Subcomplex) -> FixedBitSet {
    let k = y.ambient();
    let mut w = y.bits().clone();
    w.difference_with(z.bits());
    loop {
        let drop: Vec<usize> = w.ones().filter(|&i| k.faces(i).iter().any(|&f| !w.contains(f as usize))).collect();
        if drop.is_empty() {
            return w;
        }
        for i in drop {
            w.set(i, false);
        }
    }
}

fn set_inter(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    a.iter().copied().filter(|v| b.contains(v)).collect()
}

fn set_union(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    a.iter().chain(b).copied().collect::<BTreeSet<_>>().into_iter().collect()
}

fn set_minus(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    a.iter().copied().filter(|v| !b.contains(v)).collect()
}

/// Laws of 𝒢 on vertex subsets of `k` (each sorted, no repeats).
fn hull_laws(t: &mut Tally, k: &Arc<Complex>, a: &[VertexId], b: &[VertexId], c: &[VertexId]) {
    let w = || format!("A = {a:?}, B = {b:?}, C = {c:?} in {k:?}");
    let (ga, gb, gc) = (Subcomplex::hull(k, a), Subcomplex::hull(k, b), Subcomplex::hull(k, c));
    t.check(Law::HullVertices, ga.vertices() == a, w);
    t.check(Law::HullInjective, (a == b) == (ga == gb), w);
    let a_in_b = a.iter().all(|v| b.contains(v));
    t.check(Law::HullMonotone, !a_in_b || Direct.le(&ga, &gb), w);
    let fam = [ga.clone(), gb.clone(), gc.clone()];
    let meet = Subcomplex::intersection_all(k, &fam).expect("same ambient");
    t.check(Law::HullMeet, meet == Subcomplex::hull(k, &set_inter(&set_inter(a, b), c)), w);
    let join = Subcomplex::union_all(k, &fam).expect("same ambient");
    t.check(Law::HullJoin, Direct.le(&join, &Subcomplex::hull(k, &set_union(&set_union(a, b), c))), w);
    t.check(Law::HullDifference, Subcomplex::hull(k, &set_minus(a, b)) == Direct.minus(&ga, &gb), w);
}

/// The empty family: ⋂ over nothing is 𝒢(V(K)) = K and ⋃ over nothing is ∅.
fn hull_empty_family(t: &mut Tally, k: &Arc<Complex>) {
    let all: Vec<VertexId> = (0..k.vertex_count() as u32).collect();
    let none: [Subcomplex; 0] = [];
    let meet = Subcomplex::intersection_all(k, &none).expect("no operands");
    t.check(Law::HullMeet, meet == Subcomplex::hull(k, &all), || format!("empty family in {k:?}"));
    let join = Subcomplex::union_all(k, &none).expect("no operands");
    t.check(Law::HullJoin, Direct.le(&join, &Subcomplex::hull(k, &[])), || format!("empty family in {k:?}"));
}

fn hull_cover(t: &mut Tally, z: &Subcomplex) {
    let ok = Direct.le(z, &Subcomplex::hull(z.ambient(), &z.vertices()));
    t.check(Law::HullCover, ok, || describe(z));
}

fn fat_laws(t: &mut Tally, k: &Arc<Complex>, fat: &Subcomplex) {
    for i in 0..k.len() {
        let im = Subcomplex::image_of_simplex(k, i);
        let ok = im == Subcomplex::hull(k, k.simplex(i)) && im.is_fat();
        t.check(Law::FatSimplex, ok, || k.simplex_label(i));
        let m = Direct.meet(fat, &im);
        let ok = m.is_empty()
            || k.find(&m.vertices())
                .is_some_and(|j| k.is_face(j, i) && m == Subcomplex::image_of_simplex(k, j));
        t.check(Law::FatMeet, ok, || format!("Z = {}, σ = {}", describe(fat), k.simplex_label(i)));
    }
}

fn map_laws(t: &mut Tally, f: &SimplicialMap, a: &[VertexId], b: &[VertexId]) {
    let (src, tgt) = (f.source(), f.target());
    let fa: Vec<VertexId> = a.iter().map(|&v| f.vertex_image(v)).collect::<BTreeSet<_>>().into_iter().collect();
    let image = f.image(&Subcomplex::hull(src, a)).expect("source ambient");
    t.check(Law::HullImage, Direct.le(&image, &Subcomplex::hull(tgt, &fa)), || format!("A = {a:?}"));
    let pre = f.preimage(&Subcomplex::hull(tgt, b)).expect("target ambient");
    let ok = Subcomplex::hull(src, &f.vertex_preimage(b)) == pre;
    t.check(Law::HullPreimage, ok, || format!("B = {b:?}"));
}

fn product_laws(t: &mut Tally, k: &Arc<Complex>, l: &Arc<Complex>, a: &[VertexId], b: &[VertexId]) {
    let p = product(k, l);
    let pairs: Vec<VertexId> = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).map(|(x, y)| p.vertex(x, y)).collect();
    let lhs = Subcomplex::hull(p.complex(), &pairs);
    let rhs = p.sub_product(&Subcomplex::hull(k, a), &Subcomplex::hull(l, b)).expect("factor ambients");
    t.check(Law::HullProduct, lhs == rhs, || format!("A = {a:?}, B = {b:?}, K = {k:?}, L = {l:?}"));
    t.check(Law::Closure, rhs.is_face_closed(), || "sub_product".into());
    t.check(Law::ProductDim, p.complex().dim() == k.dim() + l.dim(), || format!("K = {k:?}, L = {l:?}"));
}

fn sd_single(t: &mut Tally, sd: &SdComplex, z: &Subcomplex, sdz: &Subcomplex) {
    let c = sd.complex();
    let ok = (0..c.len()).all(|i| {
        let top = sdz.contains(i) == z.contains(sd.top(i));
        let every = sdz.contains(i) == sd.chain(i).iter().all(|&e| z.contains(e as usize));
        top && every
    });
    t.check(Law::SdTop, ok, || describe(z));
    let verts: Vec<VertexId> = z.indices().map(|i| sd.barycenter(i)).collect();
    let ok = *sdz == Subcomplex::hull(c, &verts) && sdz.is_fat() && sdz.vertices() == verts;
    t.check(Law::SdFat, ok, || describe(z));
}

/// `x` is the whole base; the three laws that fail before subdivision.
#[allow(clippy::too_many_arguments)]
fn sd_pair(
    t: &mut Tally,
    sd: &SdComplex,
    y: &Subcomplex,
    z: &Subcomplex,
    sdx: &Subcomplex,
    sdy: &Subcomplex,
    sdz: &Subcomplex,
) -> Result<()> {
    let w = || format!("Y = {}, Z = {}", describe(y), describe(z));
    t.check(Law::SdInjective, (y == z) == (sdy == sdz), w);
    t.check(Law::SdMonotone, !Direct.le(y, z) || Direct.le(sdy, sdz), w);
    t.check(Law::SdJoin, sd.subdivide_sub(&Direct.join(y, z))? == Direct.join(sdy, sdz), w);
    t.check(Law::SdMeet, sd.subdivide_sub(&Direct.meet(y, z))? == Direct.meet(sdy, sdz), w);
    let d = Direct.minus(sdy, sdz);
    let ok = (0..sd.complex().len()).all(|i| {
        d.contains(i) == sd.chain(i).iter().all(|&e| y.contains(e as usize) && !z.contains(e as usize))
    });
    t.check(Law::SdSubtract, ok, w);
    t.check(Law::SdDoubleComplement, Direct.le(&Direct.minus(sdx, &Direct.minus(sdx, sdz)), sdz), w);
    t.check(Law::SdEmptyDifference, !d.is_empty() || Direct.le(sdy, sdz), w);
    let lhs = Direct.minus(sdx, &Direct.meet(sdy, sdz));
    let rhs = Direct.join(&Direct.minus(sdx, sdy), &Direct.minus(sdx, sdz));
    t.check(Law::SdMorgan, Direct.le(&lhs, &rhs), w);
    Ok(())
}

fn subsets(n: u32) -> Vec<Vec<VertexId>> {
    (0u32..1 << n).map(|m| (0..n).filter(|v| m >> v & 1 == 1).collect()).collect()
}

fn exhaustive(t: &mut Tally) -> Result<()> {
    let k = Arc::new(simplex(3));
    let tab = Table::new(&k, t);
    let n = tab.n as u16;

    for y in 0..n {
        for z in 0..n {
            let (my, mz) = (tab.masks[y as usize], tab.masks[z as usize]);
            let brute = tab.masks.iter().filter(|&&w| w & !my == 0 && w & mz == 0).fold(0, |a, &w| a | w);
            let got = tab.minus(&y, &z);
            t.check(Law::SubLargest, brute == tab.masks[got as usize], || format!("Y = {}, Z = {}", tab.show(&y), tab.show(&z)));
            pair_laws(&tab, t, &y, &z);
        }
    }
    for x in 0..n {
        for y in (0..n).filter(|y| tab.le(y, &x)) {
            for z in (0..n).filter(|z| tab.le(z, &x)) {
                ambient_laws(&tab, t, &x, &y, &z);
            }
        }
    }
    for y in 0..n {
        for z in 0..n {
            for z2 in 0..n {
                triple_laws(&tab, t, &y, &z, &z2);
            }
        }
    }
    for y in 0..n {
        for y2 in 0..n {
            let yy2 = tab.minus(&y, &y2);
            for z in 0..n {
                let zy2 = tab.minus(&z, &y2);
                for z2 in 0..n {
                    let lhs = tab.meet(&yy2, &tab.minus(&z, &z2));
                    let rhs = tab.meet(&zy2, &tab.minus(&y, &z2));
                    t.check(Law::SubSwap, lhs == rhs, || {
                        format!("Y = {}, Y' = {}, Z = {}, Z' = {}", tab.show(&y), tab.show(&y2), tab.show(&z), tab.show(&z2))
                    });
                }
            }
        }
    }

    for z in &tab.subs {
        hull_cover(t, z);
        if z.is_fat() {
            fat_laws(t, &k, z);
        }
    }
    let boundary = Arc::new(boundary_of_simplex(3));
    let vs = subsets(4);
    for amb in [&k, &boundary] {
        hull_empty_family(t, amb);
        for a in &vs {
            for b in &vs {
                for c in [&vs[0], a, b, &vs[5], &vs[15]] {
                    hull_laws(t, amb, a, b, c);
                }
            }
        }
    }

    let edge = Arc::new(simplex(1));
    for (src, tgt) in [(&k, &k), (&k, &boundary), (&boundary, &edge), (&boundary, &boundary)] {
        for code in 0u32..(tgt.vertex_count() as u32).pow(4) {
            let m = tgt.vertex_count() as u32;
            let vmap: Vec<VertexId> = (0..4).map(|i| code / m.pow(i) % m).collect();
            let Ok(f) = SimplicialMap::new(src, tgt, vmap) else { continue };
            for a in &vs {
                let b: Vec<VertexId> = a.iter().copied().filter(|&v| v < m).collect();
                map_laws(t, &f, a, &b);
            }
        }
    }

    let tri = Arc::new(simplex(2));
    let circle = Arc::new(boundary_of_simplex(2));
    for (p, q) in [(&edge, &tri), (&circle, &edge), (&tri, &circle)] {
        let (pa, qa) = (subsets(p.vertex_count() as u32), subsets(q.vertex_count() as u32));
        for a in &pa {
            for b in &qa {
                product_laws(t, p, q, a, b);
            }
        }
    }

    let sd = subdivide(&k);
    let sds: Vec<Subcomplex> = tab.subs.iter().map(|z| sd.subdivide_sub(z)).collect::<Result<_>>()?;
    let sdx = Subcomplex::full(sd.complex());
    for (z, sdz) in tab.subs.iter().zip(&sds) {
        sd_single(t, &sd, z, sdz);
    }
    for (y, sdy) in tab.subs.iter().zip(&sds) {
        for (z, sdz) in tab.subs.iter().zip(&sds) {
            sd_pair(t, &sd, y, z, &sdx, sdy, sdz)?;
        }
    }
    let fam = Subcomplex::union_all(sd.complex(), &sds)?;
    let all = Subcomplex::union_all(&k, &tab.subs)?;
    t.check(Law::SdJoin, sd.subdivide_sub(&all)? == fam, || "all subcomplexes of Δ³".into());
    let fam = Subcomplex::intersection_all(sd.complex(), &sds)?;
    let all = Subcomplex::intersection_all(&k, &tab.subs)?;
    t.check(Law::SdMeet, sd.subdivide_sub(&all)? == fam, || "all subcomplexes of Δ³".into());
    Ok(())
}

fn random_complex(rng: &mut ChaCha8Rng, dim: usize, extra_vertices: usize, extra_cells: usize) -> Complex {
    let nv = dim + 1 + rng.gen_range(0..=extra_vertices);
    let mut maximal = vec![sample(rng, nv, dim + 1).into_iter().map(|v| v as u32).collect::<Vec<_>>()];
    for _ in 0..rng.gen_range(0..=extra_cells) {
        let size = rng.gen_range(1..=dim + 1);
        maximal.push(sample(rng, nv, size).into_iter().map(|v| v as u32).collect());
    }
    Complex::new((0..nv).map(|v| format!("v{v}")).collect(), &maximal).expect("valid random complex")
}

fn random_sub(rng: &mut ChaCha8Rng, k: &Arc<Complex>) -> Subcomplex {
    match rng.gen_range(0..10) {
        0 => Subcomplex::empty(k),
        1 => Subcomplex::full(k),
        2 | 3 => Subcomplex::hull(k, &random_vertices(rng, k.vertex_count())),
        _ => {
            let picks = rng.gen_range(1..=4);
            let idx: Vec<usize> = (0..picks).map(|_| rng.gen_range(0..k.len())).collect();
            Subcomplex::closure_of_indices(k, idx).expect("indices in range")
        }
    }
}

fn random_vertices(rng: &mut ChaCha8Rng, n: usize) -> Vec<VertexId> {
    (0..n as u32).filter(|_| rng.gen_bool(0.5)).collect()
}

/// A simplicial map out of `k` onto a complex built from the images of its
/// maximal simplices, plus a stray simplex so the image is not everything.
fn random_map(rng: &mut ChaCha8Rng, k: &Arc<Complex>) -> SimplicialMap {
    let m = rng.gen_range(2..=k.vertex_count().max(2) + 1);
    let vmap: Vec<VertexId> = (0..k.vertex_count()).map(|_| rng.gen_range(0..m as u32)).collect();
    let mut maximal: Vec<Vec<VertexId>> =
        k.maximal_simplices().iter().map(|&i| k.simplex(i).iter().map(|&v| vmap[v as usize]).collect()).collect();
    let size = rng.gen_range(1..=m.min(3));
    maximal.push(sample(rng, m, size).into_iter().map(|v| v as u32).collect());
    let target = Arc::new(Complex::new((0..m).map(|v| format!("w{v}")).collect(), &maximal).expect("valid target"));
    SimplicialMap::new(k, &target, vmap).expect("images of simplices are simplices")
}

fn random_instance(t: &mut Tally, rng: &mut ChaCha8Rng, dim: usize) -> Result<()> {
    let k = Arc::new(random_complex(rng, dim, 3, 4));
    let x = Subcomplex::full(&k);
    let [y, y2, z, z2] = std::array::from_fn(|_| random_sub(rng, &k));

    for (a, b) in [(&y, &z), (&z, &y), (&y2, &z2)] {
        let got = Direct.minus(a, b);
        t.check(Law::Closure, got.is_face_closed(), || describe(&got));
        t.check(Law::SubLargest, *got.bits() == largest_inside(a, b), || format!("Y = {}, Z = {}", describe(a), describe(b)));
        pair_laws(&Direct, t, a, b);
    }
    ambient_laws(&Direct, t, &x, &y, &z);
    let yz = Direct.join(&y, &z);
    ambient_laws(&Direct, t, &Direct.join(&yz, &y2), &y, &z);
    triple_laws(&Direct, t, &y, &z, &z2);
    triple_laws(&Direct, t, &y, &z, &Direct.meet(&z, &z2));
    swap_law(&Direct, t, &y, &y2, &z, &z2);

    let nv = k.vertex_count();
    let [a, b, c] = std::array::from_fn(|_| random_vertices(rng, nv));
    hull_laws(t, &k, &a, &b, &c);
    hull_laws(t, &k, &a, &a, &b);
    hull_cover(t, &y);
    let fat = Subcomplex::hull(&k, &a);
    let i = rng.gen_range(0..k.len());
    let im = Subcomplex::image_of_simplex(&k, i);
    t.check(Law::FatSimplex, im == Subcomplex::hull(&k, k.simplex(i)) && im.is_fat(), || k.simplex_label(i));
    let m = Direct.meet(&fat, &im);
    let ok = m.is_empty() || k.find(&m.vertices()).is_some_and(|j| k.is_face(j, i) && m == Subcomplex::image_of_simplex(&k, j));
    t.check(Law::FatMeet, ok, || format!("Z = {}, σ = {}", describe(&fat), k.simplex_label(i)));

    let f = random_map(rng, &k);
    let b_tgt = random_vertices(rng, f.target().vertex_count());
    map_laws(t, &f, &a, &b_tgt);

    let (dp, dq) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
    let p = Arc::new(random_complex(rng, dp, 1, 1));
    let q = Arc::new(random_complex(rng, dq, 1, 1));
    let (pa, qb) = (random_vertices(rng, p.vertex_count()), random_vertices(rng, q.vertex_count()));
    product_laws(t, &p, &q, &pa, &qb);

    let sd = subdivide(&k);
    let subs = [&y, &y2, &z, &z2];
    let sds: Vec<Subcomplex> = subs.iter().map(|s| sd.subdivide_sub(s)).collect::<Result<_>>()?;
    let sdx = Subcomplex::full(sd.complex());
    sd_single(t, &sd, &y, &sds[0]);
    sd_single(t, &sd, &z, &sds[2]);
    sd_pair(t, &sd, &y, &z, &sdx, &sds[0], &sds[2])?;
    sd_pair(t, &sd, &y2, &z2, &sdx, &sds[1], &sds[3])?;
    let join = Subcomplex::union_all(&k, subs)?;
    t.check(Law::SdJoin, sd.subdivide_sub(&join)? == Subcomplex::union_all(sd.complex(), &sds)?, || describe(&join));
    let meet = Subcomplex::intersection_all(&k, subs)?;
    t.check(Law::SdMeet, sd.subdivide_sub(&meet)? == Subcomplex::intersection_all(sd.complex(), &sds)?, || describe(&meet));
    Ok(())
}

/// The known failures, each with the inclusion that survives.
pub fn counterexamples() -> Result<Vec<Counterexample>> {
    let mut out = Vec::new();
    let d = &Direct;

    // Δ¹ with Y, Z its two endpoints.
    let x = Arc::new(simplex(1));
    let full = Subcomplex::full(&x);
    let y = Subcomplex::closure(&x, &[vec![0]])?;
    let z = Subcomplex::closure(&x, &[vec![1]])?;
    let lhs = d.minus(&full, &d.meet(&y, &z));
    let rhs = d.join(&d.minus(&full, &y), &d.minus(&full, &z));
    let endpoints = d.join(&y, &z);
    let sd = subdivide(&x);
    let (sx, sy, sz) = (Subcomplex::full(sd.complex()), sd.subdivide_sub(&y)?, sd.subdivide_sub(&z)?);
    let repaired = d.le(&d.minus(&sx, &d.meet(&sy, &sz)), &d.join(&d.minus(&sx, &sy), &d.minus(&sx, &sz)));
    out.push(Counterexample {
        name: "Morgan law for a meet".into(),
        instance: format!("X = Δ¹, Y = {}, Z = {}", describe(&y), describe(&z)),
        holds: format!("(X −Δ Y) ∪ (X −Δ Z) = {} ≤ X −Δ (Y ∩ Z) = {}", describe(&rhs), describe(&lhs)),
        fails: "X −Δ (Y ∩ Z) ≤ (X −Δ Y) ∪ (X −Δ Z)".into(),
        reproduced: d.le(&rhs, &lhs)
            && !d.le(&lhs, &rhs)
            && lhs == full
            && rhs == endpoints
            && d.minus(&full, &endpoints).is_empty(),
        repaired_after_sd: Some(repaired),
    });

    // Δ² and its boundary.
    let x = Arc::new(simplex(2));
    let full = Subcomplex::full(&x);
    let rim = Subcomplex::closure(&x, &[vec![0, 1], vec![0, 2], vec![1, 2]])?;
    let once = d.minus(&full, &rim);
    let twice = d.minus(&full, &once);
    let sd = subdivide(&x);
    let (sx, srim) = (Subcomplex::full(sd.complex()), sd.subdivide_sub(&rim)?);
    let repaired = d.le(&d.minus(&sx, &d.minus(&sx, &srim)), &srim);
    out.push(Counterexample {
        name: "double complement".into(),
        instance: format!("X = Δ², Z = {}", describe(&rim)),
        holds: format!("Z ≤ X −Δ (X −Δ Z) = {}", describe(&twice)),
        fails: "X −Δ (X −Δ Z) ≤ Z".into(),
        reproduced: once.is_empty() && twice == full && d.le(&rim, &twice) && !d.le(&twice, &rim),
        repaired_after_sd: Some(repaired),
    });

    let repaired = !d.minus(&sx, &srim).is_empty() || d.le(&sx, &srim);
    out.push(Counterexample {
        name: "empty difference".into(),
        instance: format!("Y = Δ², Z = {}", describe(&rim)),
        holds: "Y −Δ Z = ∅".into(),
        fails: "Y −Δ Z = ∅ ⇒ Y ≤ Z".into(),
        reproduced: once.is_empty() && !d.le(&full, &rim),
        repaired_after_sd: Some(repaired),
    });

    // Two points mapped onto the ends of an edge.
    let two = Arc::new(Complex::new(vec!["a".into(), "b".into()], &[])?);
    let edge = Arc::new(simplex(1));
    let f = SimplicialMap::new(&two, &edge, vec![0, 1])?;
    let image = f.image(&Subcomplex::hull(&two, &[0, 1]))?;
    let hull = Subcomplex::hull(&edge, &[0, 1]);
    out.push(Counterexample {
        name: "hull of an image".into(),
        instance: "f : {a, b} → Δ¹ bijective on vertices, A = {a, b}".into(),
        holds: format!("f(𝒢(A)) = {} ≤ 𝒢(f(A)) = {}", describe(&image), describe(&hull)),
        fails: "𝒢(f(A)) ≤ f(𝒢(A))".into(),
        reproduced: d.le(&image, &hull) && !d.le(&hull, &image),
        repaired_after_sd: None,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexamples_reproduce() {
        let cs = counterexamples().unwrap();
        assert_eq!(cs.len(), 4);
        for c in &cs {
            assert!(c.reproduced, "{c:?}");
            assert_ne!(c.repaired_after_sd, Some(false), "{c:?}");
        }
    }

    #[test]
    fn short_random_run_passes() {
        let r = run_laws(&LawConfig { seed: 7, random_instances: 200, exhaustive: false }).unwrap();
        let failing: Vec<_> = r.failing().into_iter().filter(|l| l.failures > 0).collect();
        assert!(failing.is_empty(), "{failing:#?}");
    }

    #[test]
    fn peeling_oracle_on_the_double_complement() {
        let x = Arc::new(simplex(2));
        let rim = Subcomplex::closure(&x, &[vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap();
        let w = largest_inside(&Subcomplex::full(&x), &rim);
        assert!(w.is_clear());
        let v = Subcomplex::closure(&x, &[vec![0]]).unwrap();
        let w = largest_inside(&rim, &v);
        assert_eq!(w, Subcomplex::closure(&x, &[vec![1, 2]]).unwrap().bits().clone());
    }

    #[test]
    fn delta_three_has_one_less_than_dedekind_four_subcomplexes() {
        // antichains of the Boolean lattice on four points, less the one holding only ∅
        assert_eq!(all_subcomplexes(&Arc::new(simplex(3))).len(), 168 - 1);
    }
}
