//! Brute-force oracles over finite fields: the full subobject lattice, the
//! quotient Hom colimit taken literally over every index pair, and quotient
//! length as the longest chain of non-C steps.

use std::collections::{HashSet, VecDeque};

use crate::abcat::{hom_basis, quotient_object, spin_submodule, Mor, Obj, QuotientObj, SubObj};
use crate::error::{Error, Result};
use crate::exactlin::{self, Mat};
use crate::quotient::{q_classify, QClass};
use crate::serre::SerreSpec;

/// Refuses lattices larger than this.
pub const MAX_SUBOBJECTS: usize = 4096;

/// Every subobject of `m` (prime fields only), in discovery order.
pub fn all_subobjects(m: &Obj) -> Result<Vec<SubObj>> {
    let field = m.field();
    let elements = field
        .elements()
        .ok_or_else(|| Error::RequirementUnmet("subobject enumeration needs a prime field".into()))?;
    let p = elements.len();
    let offsets = m.offsets();
    // homogeneous vectors suffice: subobjects are graded by vertex
    let mut generators = Vec::new();
    for (v, &d) in m.dims().iter().enumerate() {
        let count = p
            .checked_pow(d as u32)
            .filter(|&c| c <= MAX_SUBOBJECTS)
            .ok_or_else(|| Error::RequirementUnmet("vertex space too large to enumerate".into()))?;
        for code in 1..count {
            let mut vec = Mat::zeros(field, m.dim(), 1);
            let mut c = code;
            for r in 0..d {
                vec.set(offsets[v] + r, 0, elements[c % p].clone());
                c /= p;
            }
            generators.push(vec);
        }
    }
    let zero = SubObj::zero(m);
    let key = |s: &SubObj| (0..m.dims().len()).map(|v| s.basis(v).clone()).collect::<Vec<_>>();
    let mut seen = HashSet::new();
    seen.insert(key(&zero));
    let mut out = vec![zero.clone()];
    let mut queue = VecDeque::from([zero]);
    while let Some(s) = queue.pop_front() {
        let spanning_now = global_span(&s);
        for g in &generators {
            let next = spin_submodule(m, &spanning_now.hstack(g)?)?;
            if seen.insert(key(&next)) {
                if out.len() >= MAX_SUBOBJECTS {
                    return Err(Error::RequirementUnmet("subobject lattice too large".into()));
                }
                out.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(out)
}

/// Basis of a subobject in the parent's global carrier coordinates.
fn global_span(s: &SubObj) -> Mat {
    let parent = s.parent();
    let field = parent.field();
    let offsets = parent.offsets();
    let total: usize = (0..parent.dims().len()).map(|v| s.basis(v).cols()).sum();
    let mut out = Mat::zeros(field, parent.dim(), total);
    let mut col = 0;
    for v in 0..parent.dims().len() {
        let b = s.basis(v);
        out.put_block(offsets[v], col, b);
        col += b.cols();
    }
    out
}

fn flatten_col(m: &Mor) -> Mat {
    let v = m.flatten();
    Mat::from_rows(m.field(), 1, v.into_iter().map(|x| vec![x]).collect()).expect("column")
}

struct Term {
    m_sub: SubObj,
    n_quot: QuotientObj,
    basis: Vec<Mor>,
    /// Flattened basis as columns, for coordinates.
    coords: Mat,
}

/// The result of the literal colimit computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColimitReport {
    pub dimension: usize,
    pub index_pairs: usize,
    pub directed: bool,
}

/// `dim colim Hom(M', N/N')` over all `(M', N')` with `M/M'` and `N'` in C.
///
/// For a directed system of finite-dimensional spaces the colimit is the
/// union of the images of the terms, and the image of `V_i` is
/// `V_i / Σ_{j ≥ i} ker φ_ij`, so the dimension is the largest of these.
pub fn colimit_dimension(m: &Obj, n: &Obj, c: &SerreSpec) -> Result<ColimitReport> {
    let m_subs: Vec<SubObj> = all_subobjects(m)?
        .into_iter()
        .filter(|s| quotient_object(m, s).and_then(|q| c.member(&q.obj)).unwrap_or(false))
        .collect();
    let n_subs: Vec<SubObj> = all_subobjects(n)?
        .into_iter()
        .filter(|s| c.member(s.obj()).unwrap_or(false))
        .collect();
    let directed = is_directed(&m_subs, &n_subs, m, c)?;
    let mut terms = Vec::with_capacity(m_subs.len() * n_subs.len());
    for ms in &m_subs {
        for ns in &n_subs {
            let n_quot = quotient_object(n, ns)?;
            let basis = hom_basis(ms.obj(), &n_quot.obj)?;
            let rows = ms.obj().dims().iter().zip(n_quot.obj.dims()).map(|(a, b)| a * b).sum();
            let mut coords = Mat::zeros(m.field(), rows, 0);
            for b in &basis {
                coords = coords.hstack(&flatten_col(b))?;
            }
            terms.push(Term {
                m_sub: ms.clone(),
                n_quot,
                basis,
                coords,
            });
        }
    }
    let m_below = containment(&m_subs)?;
    let n_below = containment(&n_subs)?;
    let width = n_subs.len();
    let mut best = 0;
    for (i, ti) in terms.iter().enumerate() {
        let dim_i = ti.basis.len();
        if dim_i <= best {
            continue;
        }
        let (mi, ni) = (i / width, i % width);
        let mut killed = Mat::zeros(m.field(), dim_i, 0);
        for (j, tj) in terms.iter().enumerate() {
            // (M'_i, N'_i) ≤ (M'_j, N'_j) iff M'_j ⊆ M'_i and N'_i ⊆ N'_j
            let (mj, nj) = (j / width, j % width);
            if i == j || !m_below[mi][mj] || !n_below[nj][ni] {
                continue;
            }
            let phi = transition(ti, tj)?;
            killed = killed.hstack(&exactlin::kernel_basis(&phi))?;
        }
        best = best.max(dim_i - killed.rank());
    }
    Ok(ColimitReport {
        dimension: best,
        index_pairs: terms.len(),
        directed,
    })
}

/// `below[a][b]` iff `subs[b] ⊆ subs[a]`.
fn containment(subs: &[SubObj]) -> Result<Vec<Vec<bool>>> {
    subs.iter()
        .map(|a| subs.iter().map(|b| b.is_contained_in(a)).collect())
        .collect()
}

/// Matrix of `φ_ij: V_i -> V_j`, restricting along `M'_j ⊆ M'_i` and
/// projecting `N/N'_i -> N/N'_j`.
fn transition(ti: &Term, tj: &Term) -> Result<Mat> {
    let restrict = ti.m_sub.inclusion_of(&tj.m_sub)?;
    let field = ti.coords.field();
    let proj_maps = (0..tj.n_quot.proj.maps().len())
        .map(|v| Ok(tj.n_quot.proj.map(v).mul(&ti.n_quot.section[v])?))
        .collect::<Result<Vec<_>>>()?;
    let proj = Mor::new(&ti.n_quot.obj, &tj.n_quot.obj, proj_maps)?;
    let mut out = Mat::zeros(field, tj.basis.len(), 0);
    for b in &ti.basis {
        let moved = proj.after(&b.after(&restrict)?)?;
        let x = exactlin::solve(&tj.coords, &flatten_col(&moved))?
            .ok_or_else(|| Error::BackendContract("transition leaves the hom space".into()))?;
        out = out.hstack(&x)?;
    }
    Ok(out)
}

fn is_directed(m_subs: &[SubObj], n_subs: &[SubObj], m: &Obj, c: &SerreSpec) -> Result<bool> {
    for a in m_subs {
        for b in m_subs {
            let meet = a.intersect(b)?;
            if !c.member(&quotient_object(m, &meet)?.obj)? {
                return Ok(false);
            }
        }
    }
    for a in n_subs {
        for b in n_subs {
            let join = a.sum(b)?;
            if !c.member(join.obj())? {
                return Ok(false);
            }
        }
    }
    Ok(!m_subs.is_empty() && !n_subs.is_empty())
}

/// Longest chain `0 = X_0 ⊂ ... ⊂ X_n = X` counting only the steps that are
/// not isomorphisms in A/C.
pub fn chain_length(x: &Obj, c: &SerreSpec) -> Result<usize> {
    let mut subs = all_subobjects(x)?;
    subs.sort_by_key(SubObj::dim);
    let mut best = vec![0usize; subs.len()];
    for i in 0..subs.len() {
        for k in 0..i {
            if subs[k].dim() < subs[i].dim() && subs[k].is_contained_in(&subs[i])? {
                let step = subs[i].inclusion_of(&subs[k])?;
                let counts = usize::from(q_classify(&step, c)? != QClass::Iso);
                best[i] = best[i].max(best[k] + counts);
            }
        }
    }
    Ok(*best.last().expect("the whole object is a subobject"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abcat::{direct_sum, Backend};
    use crate::field::Field;

    fn m12(b: &Backend) -> Obj {
        Obj::new(b, vec![1, 1], vec![Mat::identity(b.field(), 1)]).unwrap()
    }

    #[test]
    fn lattice_sizes() {
        let b = Backend::path_a2(Field::Prime(2));
        assert_eq!(all_subobjects(&m12(&b)).unwrap().len(), 3);
        // S1 ⊕ S1 over GF(2): 0, three lines, whole
        let s = direct_sum(&b.simple(0), &b.simple(0)).unwrap();
        assert_eq!(all_subobjects(&s).unwrap().len(), 5);
    }

    #[test]
    fn m12_colimit_mod_s2() {
        let b = Backend::path_a2(Field::Prime(2));
        let m = m12(&b);
        let c = SerreSpec::from_labels(&b, &["S2"]).unwrap();
        let r = colimit_dimension(&m, &m, &c).unwrap();
        assert_eq!(r.dimension, 1);
        assert!(r.directed);
        assert_eq!(r.index_pairs, 2);
        assert_eq!(chain_length(&m, &c).unwrap(), 1);
        assert_eq!(chain_length(&m, &SerreSpec::zero(&b)).unwrap(), 2);
    }
}
