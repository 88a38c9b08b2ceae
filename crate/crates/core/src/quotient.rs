//! The quotient category A/C.
//!
//! `Hom_{A/C}(M, N)` is the colimit of `Hom_A(M', N/N')` over subobjects with
//! `M/M'` and `N'` in C. At finite length that index poset has a greatest
//! element, the canonical pair `(c_C(M), t_C(N))`, so every quotient morphism
//! is stored as a single representative `c_C(M) -> N/t_C(N)` and two quotient
//! morphisms are equal iff their representatives are equal matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::abcat::{
    self, cokernel, hom_basis, image, kernel, quotient_object, search_combinations, Mor, Obj, QuotientObj,
    SubObj,
};
use crate::error::{Error, Result};
use crate::exactlin::{self, Mat};
use crate::field::FieldElem;
use crate::serre::SerreSpec;

/// An object together with its canonical pair for a fixed C.
#[derive(Clone, Debug)]
pub struct Localized {
    pub obj: Obj,
    /// `c_C(M)`
    pub reject: SubObj,
    /// `t_C(M)`
    pub torsion: SubObj,
    /// `M / t_C(M)` with projection and linear section.
    pub reduced: QuotientObj,
}

pub fn localize(c: &SerreSpec, m: &Obj) -> Result<Arc<Localized>> {
    let reject = c.reject_part(m)?;
    let torsion = c.torsion_part(m)?;
    let reduced = quotient_object(m, &torsion)?;
    Ok(Arc::new(Localized {
        obj: m.clone(),
        reject,
        torsion,
        reduced,
    }))
}

/// A morphism of A/C in canonical form.
#[derive(Clone)]
pub struct QMor {
    serre: SerreSpec,
    source: Arc<Localized>,
    target: Arc<Localized>,
    rep: Mor,
}

impl fmt::Debug for QMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QMor").field("rep", &self.rep).finish()
    }
}

impl PartialEq for QMor {
    fn eq(&self, other: &Self) -> bool {
        self.serre == other.serre
            && self.source.obj == other.source.obj
            && self.target.obj == other.target.obj
            && self.rep == other.rep
    }
}

impl QMor {
    fn new(serre: &SerreSpec, source: Arc<Localized>, target: Arc<Localized>, rep: Mor) -> QMor {
        debug_assert_eq!(rep.source(), source.reject.obj());
        debug_assert_eq!(rep.target(), &target.reduced.obj);
        QMor {
            serre: serre.clone(),
            source,
            target,
            rep,
        }
    }

    pub fn serre(&self) -> &SerreSpec {
        &self.serre
    }

    pub fn source(&self) -> &Obj {
        &self.source.obj
    }

    pub fn target(&self) -> &Obj {
        &self.target.obj
    }

    pub fn source_data(&self) -> &Arc<Localized> {
        &self.source
    }

    pub fn target_data(&self) -> &Arc<Localized> {
        &self.target
    }

    /// The canonical representative `c_C(M) -> N/t_C(N)`.
    pub fn rep(&self) -> &Mor {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// The identity of `M` in A/C.
    pub fn identity(c: &SerreSpec, m: &Obj) -> Result<QMor> {
        canonical_map(&m.identity(), c)
    }

    pub fn zero(c: &SerreSpec, m: &Obj, n: &Obj) -> Result<QMor> {
        let (src, tgt) = (localize(c, m)?, localize(c, n)?);
        let rep = Mor::zero(src.reject.obj(), &tgt.reduced.obj);
        Ok(QMor::new(c, src, tgt, rep))
    }

    fn check_parallel(&self, other: &QMor) -> Result<()> {
        if self.serre != other.serre || self.source.obj != other.source.obj || self.target.obj != other.target.obj {
            return Err(Error::ComposeError("quotient morphisms are not parallel".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &QMor) -> Result<QMor> {
        self.check_parallel(other)?;
        Ok(QMor {
            rep: self.rep.add(&other.rep)?,
            ..self.clone()
        })
    }

    pub fn scale(&self, s: &FieldElem) -> QMor {
        QMor {
            rep: self.rep.scale(s),
            ..self.clone()
        }
    }

    /// Lemma-2.4 style classification of this morphism.
    pub fn classify(&self) -> Result<QClassification> {
        classify_mor(&self.rep, &self.serre)
    }
}

/// Basis of `Hom_{A/C}(M, N) = Hom_A(c_C(M), N/t_C(N))`.
pub fn qhom_basis(m: &Obj, n: &Obj, c: &SerreSpec) -> Result<Vec<QMor>> {
    let (src, tgt) = (localize(c, m)?, localize(c, n)?);
    qhom_basis_localized(c, &src, &tgt)
}

pub fn qhom_basis_localized(c: &SerreSpec, src: &Arc<Localized>, tgt: &Arc<Localized>) -> Result<Vec<QMor>> {
    Ok(hom_basis(src.reject.obj(), &tgt.reduced.obj)?
        .into_iter()
        .map(|rep| QMor::new(c, src.clone(), tgt.clone(), rep))
        .collect())
}

/// The canonical functor T on a morphism `f: M -> N`: restrict to
/// `c_C(M)` and project onto `N/t_C(N)`.
pub fn canonical_map(f: &Mor, c: &SerreSpec) -> Result<QMor> {
    let (src, tgt) = (localize(c, f.source())?, localize(c, f.target())?);
    canonical_map_localized(f, c, &src, &tgt)
}

pub fn canonical_map_localized(
    f: &Mor,
    c: &SerreSpec,
    src: &Arc<Localized>,
    tgt: &Arc<Localized>,
) -> Result<QMor> {
    if f.source() != &src.obj || f.target() != &tgt.obj {
        return Err(Error::ComposeError("morphism does not match the localized objects".into()));
    }
    let rep = tgt.reduced.proj.after(&f.after(src.reject.inclusion())?)?;
    Ok(QMor::new(c, src.clone(), tgt.clone(), rep))
}

/// The class in A/C of an element `f: M' -> N/N'` of the direct system,
/// where `m_sub = M'` has `M/M'` in C and `n_proj: N -> N/N'` has kernel in C.
pub fn from_system(c: &SerreSpec, m_sub: &SubObj, n_proj: &Mor, f: &Mor) -> Result<QMor> {
    from_system_mono(c, m_sub.inclusion(), n_proj, f)
}

/// As [`from_system`], with the index subobject given by a monomorphism
/// `m_inc: M' -> M`.
pub fn from_system_mono(c: &SerreSpec, m_inc: &Mor, n_proj: &Mor, f: &Mor) -> Result<QMor> {
    if f.source() != m_inc.source() || f.target() != n_proj.target() {
        return Err(Error::ComposeError("system element does not match its index pair".into()));
    }
    if !m_inc.is_injective() {
        return Err(Error::NotSubobject("index map is not a monomorphism".into()));
    }
    let src = localize(c, m_inc.target())?;
    let tgt = localize(c, n_proj.source())?;
    let field = f.field();
    // c_C(M) ⊆ M' because M/M' ∈ C
    let into_sub_maps = m_inc
        .maps()
        .iter()
        .enumerate()
        .map(|(v, inc)| {
            exactlin::solve(inc, src.reject.basis(v))?.ok_or_else(|| {
                Error::NotSubobject("index subobject does not contain the reject; its quotient is not in C".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let into_sub = Mor::new(src.reject.obj(), m_inc.source(), into_sub_maps)?;
    // N' ⊆ t_C(N) gives the induced map N/N' -> N/t_C(N)
    let transfer_maps = n_proj
        .maps()
        .iter()
        .zip(tgt.reduced.proj.maps())
        .map(|(p, pt)| {
            let section = exactlin::solve(p, &Mat::identity(field, p.rows()))?
                .ok_or_else(|| Error::NotSubobject("index projection is not surjective".into()))?;
            Ok(pt.mul(&section)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let bad_kernel = || Error::NotSubobject("index quotient kernel is not contained in the torsion part".into());
    let transfer = Mor::new(n_proj.target(), &tgt.reduced.obj, transfer_maps).map_err(|_| bad_kernel())?;
    if !transfer.after(n_proj)?.sub(&tgt.reduced.proj)?.is_zero() {
        return Err(bad_kernel());
    }
    let rep = transfer.after(&f.after(&into_sub)?)?;
    Ok(QMor::new(c, src, tgt, rep))
}

/// `g ∘ f` in A/C. `f`'s representative lands in `(c(N)+t(N))/t(N)`; each
/// vector is lifted to N, split along `c(N) + t(N)`, and its `c(N)` part is
/// fed to `g`'s representative (which kills `c(N) ∩ t(N)`).
pub fn q_compose(g: &QMor, f: &QMor) -> Result<QMor> {
    if f.serre != g.serre {
        return Err(Error::ComposeError("different Serre subcategories".into()));
    }
    if f.target.obj != g.source.obj {
        return Err(Error::ComposeError("target of the first map is not the source of the second".into()));
    }
    let mid = &f.target;
    let maps = (0..f.source.obj.dims().len())
        .map(|v| {
            let lift = mid.reduced.section[v].mul(f.rep.map(v))?;
            let rb = mid.reject.basis(v);
            let split = rb.hstack(mid.torsion.basis(v))?;
            let coords = exactlin::solve(&split, &lift)?.ok_or_else(|| {
                Error::BackendContract("representative does not factor through c(N) + t(N)".into())
            })?;
            let reject_part = coords.row_range(0, rb.cols());
            Ok(g.rep.map(v).mul(&reject_part)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let rep = Mor::new(f.source.reject.obj(), &g.target.reduced.obj, maps)?;
    Ok(QMor::new(&f.serre, f.source.clone(), g.target.clone(), rep))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QClass {
    Zero,
    Mono,
    Epi,
    Iso,
    General,
}

impl fmt::Display for QClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            QClass::Zero => "zero",
            QClass::Mono => "mono",
            QClass::Epi => "epi",
            QClass::Iso => "iso",
            QClass::General => "general",
        };
        f.write_str(s)
    }
}

/// The three independent flags; `Tu` may be zero and mono at once.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QClassification {
    pub zero: bool,
    pub mono: bool,
    pub epi: bool,
}

impl QClassification {
    pub fn iso(&self) -> bool {
        self.mono && self.epi
    }

    /// Single label, preferring iso, then zero, mono, epi.
    pub fn summary(&self) -> QClass {
        if self.iso() {
            QClass::Iso
        } else if self.zero {
            QClass::Zero
        } else if self.mono {
            QClass::Mono
        } else if self.epi {
            QClass::Epi
        } else {
            QClass::General
        }
    }
}

/// `Tu` is zero / mono / epi iff `Im u` / `Ker u` / `Coker u` lies in C.
pub fn classify_mor(u: &Mor, c: &SerreSpec) -> Result<QClassification> {
    Ok(QClassification {
        zero: c.member(image(u)?.obj())?,
        mono: c.member(kernel(u)?.obj())?,
        epi: c.member(&cokernel(u)?.obj)?,
    })
}

pub fn q_classify(u: &Mor, c: &SerreSpec) -> Result<QClass> {
    Ok(classify_mor(u, c)?.summary())
}

/// Number of composition factors of `x` outside C.
pub fn q_length(x: &Obj, c: &SerreSpec) -> Result<usize> {
    Ok(abcat::composition_factors(x)?
        .into_iter()
        .filter(|s| !c.contains_simple(*s))
        .count())
}

fn surviving_factors(x: &Obj, c: &SerreSpec) -> Result<BTreeMap<usize, usize>> {
    let mut out = BTreeMap::new();
    for s in abcat::composition_factors(x)? {
        if !c.contains_simple(s) {
            *out.entry(s).or_insert(0) += 1;
        }
    }
    Ok(out)
}

/// An isomorphism `M -> N` in A/C, if one exists. Composition factors
/// outside C must agree; then a basis element classified iso is tried first,
/// followed by coefficient search over the quotient Hom basis.
pub fn find_q_iso(m: &Obj, n: &Obj, c: &SerreSpec) -> Result<Option<QMor>> {
    if surviving_factors(m, c)? != surviving_factors(n, c)? {
        return Ok(None);
    }
    let (src, tgt) = (localize(c, m)?, localize(c, n)?);
    let basis: Vec<Mor> = hom_basis(src.reject.obj(), &tgt.reduced.obj)?;
    let found = search_combinations(src.reject.obj(), &tgt.reduced.obj, &basis, |r| {
        classify_mor(r, c).map(|k| k.iso()).unwrap_or(false)
    });
    Ok(found.map(|rep| QMor::new(c, src, tgt, rep)))
}

pub fn q_iso(m: &Obj, n: &Obj, c: &SerreSpec) -> Result<bool> {
    Ok(find_q_iso(m, n, c)?.is_some())
}
