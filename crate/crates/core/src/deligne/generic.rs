//! The abstract fold over a chain of categories C₀ ⇄ C₁ ⇄ … ⇄ C.
//!
//! Objects of every C_k share one Rust type; stage `s` goes from C_s to
//! C_{s+1}. Laws are spot-checked on the objects the fold produces.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, QSpaceComplex};

pub trait DeligneSystem {
    type Obj: Clone;

    fn stage_count(&self) -> usize;

    /// Truncation degree p(s) of stage `s`.
    fn cut(&self, s: usize) -> i32;

    /// ι_s : C_s → C_{s+1}.
    fn push(&self, s: usize, a: &Self::Obj) -> Result<Self::Obj>;

    /// j_s : C_{s+1} → C_s.
    fn pull(&self, s: usize, a: &Self::Obj) -> Self::Obj;

    fn truncate(&self, cut: i32, a: &Self::Obj) -> Self::Obj;

    /// The iso oracle standing in for ≃.
    fn equivalent(&self, a: &Self::Obj, b: &Self::Obj) -> bool;
}

fn law(ok: bool, s: usize, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Contract(format!("stage {s}: {what}")))
    }
}

/// P₋₁ = F₀, P_s = τ_{p(s)} ι_s P_{s−1}; returns all of them. Along the way
/// checks j∘ι ≃ 1, τ∘τ ≃ τ, τ_{p(s+1)}τ_{p(s)} ≃ τ_{p(s)},
/// j τ ≃ τ j, and the proof step j_s P_s ≃ P_{s−1}.
pub fn generic_fold<S: DeligneSystem>(sys: &S, f0: &S::Obj) -> Result<Vec<S::Obj>> {
    if sys.stage_count() > 0 && !sys.equivalent(&sys.truncate(sys.cut(0), f0), f0) {
        return Err(Error::Contract("F₀ is not fixed by the first truncation".into()));
    }
    let mut out = vec![f0.clone()];
    for s in 0..sys.stage_count() {
        let prev = out.last().expect("nonempty");
        let pushed = sys.push(s, prev)?;
        law(sys.equivalent(&sys.pull(s, &pushed), prev), s, "j ∘ ι ≃ 1 fails")?;
        let p = sys.cut(s);
        let t = sys.truncate(p, &pushed);
        law(sys.equivalent(&sys.truncate(p, &t), &t), s, "idempotence τ ∘ τ ≃ τ fails")?;
        if s + 1 < sys.stage_count() {
            law(sys.equivalent(&sys.truncate(sys.cut(s + 1), &t), &t), s, "τ_{p(k+1)} ∘ τ_{p(k)} ≃ τ_{p(k)} fails")?;
        }
        law(
            sys.equivalent(&sys.pull(s, &t), &sys.truncate(p, &sys.pull(s, &pushed))),
            s,
            "compatibility j ∘ τ ≃ τ ∘ j fails",
        )?;
        law(sys.equivalent(&sys.pull(s, &t), prev), s, "j_k P_k ≃ P_{k−1} fails")?;
        out.push(t);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericVerdict {
    pub ax1: bool,
    /// AX2 per stage.
    pub ax2: Vec<bool>,
}

impl GenericVerdict {
    pub fn pass(&self) -> bool {
        self.ax1 && self.ax2.iter().all(|&b| b)
    }
}

/// AX1: j⁰A ≃ F₀. AX2: j^{s+1}A ≃ τ_{p(s)} ι_s j^s A.
pub fn generic_check<S: DeligneSystem>(sys: &S, a: &S::Obj, f0: &S::Obj) -> Result<GenericVerdict> {
    let n = sys.stage_count();
    // restrictions[s] = j^s A, restrictions[n] = A
    let mut restrictions = vec![a.clone()];
    for s in (0..n).rev() {
        let next = sys.pull(s, restrictions.last().expect("nonempty"));
        restrictions.push(next);
    }
    restrictions.reverse();
    let ax1 = sys.equivalent(&restrictions[0], f0);
    let ax2 = (0..n)
        .map(|s| Ok(sys.equivalent(&restrictions[s + 1], &sys.truncate(sys.cut(s), &sys.push(s, &restrictions[s])?))))
        .collect::<Result<_>>()?;
    Ok(GenericVerdict { ax1, ax2 })
}

/// τ_{≤p} of a complex of vector spaces.
pub fn truncate_complex(c: &QSpaceComplex, p: i32) -> QSpaceComplex {
    if p >= c.hi() {
        return c.clone();
    }
    if p < c.lo() {
        return QSpaceComplex::zero();
    }
    let len = (p - c.lo()) as usize + 1;
    let ker = c.diff(p).kernel();
    let mut dims: Vec<usize> = (c.lo()..p).map(|d| c.dim(d)).collect();
    dims.push(ker.ncols());
    let mut diffs: Vec<Matrix> = c.diffs()[..len - 1].to_vec();
    if len > 1 {
        diffs[len - 2] = ker.solve(&c.diff(p - 1)).expect("boundaries are cocycles");
    }
    QSpaceComplex::new(c.lo(), dims, diffs).expect("truncation is a complex")
}

/// Toy instance: every C_k is bounded complexes of ℚ-spaces, ι = j = 1,
/// τ is truncation and ≃ compares cohomology.
#[derive(Clone, Debug)]
pub struct ToySystem {
    pub cuts: Vec<i32>,
}

pub fn toy_truncation_system(cuts: Vec<i32>) -> ToySystem {
    ToySystem { cuts }
}

impl DeligneSystem for ToySystem {
    type Obj = QSpaceComplex;

    fn stage_count(&self) -> usize {
        self.cuts.len()
    }

    fn cut(&self, s: usize) -> i32 {
        self.cuts[s]
    }

    fn push(&self, _: usize, a: &QSpaceComplex) -> Result<QSpaceComplex> {
        Ok(a.clone())
    }

    fn pull(&self, _: usize, a: &QSpaceComplex) -> QSpaceComplex {
        a.clone()
    }

    fn truncate(&self, cut: i32, a: &QSpaceComplex) -> QSpaceComplex {
        truncate_complex(a, cut)
    }

    fn equivalent(&self, a: &QSpaceComplex, b: &QSpaceComplex) -> bool {
        a.cohomology() == b.cohomology()
    }
}
