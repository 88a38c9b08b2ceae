//! Tensor structure on the group-algebra and matvec backends.
//!
//! Group backends use the diagonal action on `X ⊗ Y` (Kronecker products of
//! the generator matrices). Matvec backends use the convolution tensor
//! `(X⊗Y)_{ik} = ⊕_j X_{ij} ⊗ Y_{jk}` inside each block and zero across
//! blocks; its summands are stacked by `j`, so the associator is a
//! permutation rather than the identity. Unitors are identities because
//! `1 ⊗ X` and `X ⊗ 1` literally coincide with `X`.

use crate::abcat::{Backend, Mor, Obj, Presentation};
use crate::error::{Error, Result};
use crate::exactlin::{kronecker, Mat};
use crate::quotient::{from_system_mono, QMor};
use crate::serre::SerreSpec;

fn require_tensor(b: &Backend) -> Result<()> {
    if b.tensor_capable() {
        Ok(())
    } else {
        Err(Error::RequirementUnmet(format!("backend `{}` has no tensor structure", b.name())))
    }
}

fn same_backend(x: &Obj, y: &Obj) -> Result<()> {
    if x.backend() != y.backend() {
        return Err(Error::BackendMismatch(x.backend().name().into(), y.backend().name().into()));
    }
    require_tensor(x.backend())
}

/// Vertex pairs `(u, w)` whose `X_u ⊗ Y_w` are stacked, in order, at vertex
/// `v` of a tensor product.
fn components(b: &Backend, v: usize) -> Vec<(usize, usize)> {
    match b.presentation() {
        Presentation::Matvec { blocks } => {
            let (blk, i, k) = matvec_cell(blocks, v);
            (0..blocks[blk])
                .map(|j| (b.matvec_vertex(blk, i, j), b.matvec_vertex(blk, j, k)))
                .collect()
        }
        _ => vec![(0, 0)],
    }
}

/// `(block, i, j)` of a matvec vertex.
fn matvec_cell(blocks: &[usize], v: usize) -> (usize, usize, usize) {
    let mut rest = v;
    let mut blk = 0;
    while rest >= blocks[blk] * blocks[blk] {
        rest -= blocks[blk] * blocks[blk];
        blk += 1;
    }
    (blk, rest / blocks[blk], rest % blocks[blk])
}

/// The unit object: the trivial character, or the diagonal cells.
pub fn unit(b: &Backend) -> Result<Obj> {
    require_tensor(b)?;
    let field = b.field();
    match b.presentation() {
        Presentation::Matvec { blocks } => {
            let dims = (0..b.vertex_count())
                .map(|v| {
                    let (_, i, j) = matvec_cell(blocks, v);
                    usize::from(i == j)
                })
                .collect();
            Obj::new(b, dims, Vec::new())
        }
        _ => {
            let actions = b.arrows().iter().map(|_| Mat::identity(field, 1)).collect();
            Obj::new(b, vec![1], actions)
        }
    }
}

pub fn tensor_obj(x: &Obj, y: &Obj) -> Result<Obj> {
    same_backend(x, y)?;
    let b = x.backend();
    let dims = (0..b.vertex_count())
        .map(|v| {
            components(b, v)
                .into_iter()
                .map(|(u, w)| x.dims()[u] * y.dims()[w])
                .sum()
        })
        .collect();
    let actions = x
        .actions()
        .iter()
        .zip(y.actions())
        .map(|(a, c)| kronecker(a, c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Obj::trusted(b, dims, actions))
}

pub fn tensor_mor(f: &Mor, g: &Mor) -> Result<Mor> {
    let source = tensor_obj(f.source(), g.source())?;
    let target = tensor_obj(f.target(), g.target())?;
    let b = source.backend().clone();
    let maps = (0..b.vertex_count())
        .map(|v| {
            let parts = components(&b, v)
                .into_iter()
                .map(|(u, w)| kronecker(f.map(u), g.map(w)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Mat::block_diag(b.field(), &parts))
        })
        .collect::<Result<Vec<_>>>()?;
    Mor::new(&source, &target, maps)
}

/// `a_{X,Y,Z}: (X⊗Y)⊗Z -> X⊗(Y⊗Z)`.
pub fn associator(x: &Obj, y: &Obj, z: &Obj) -> Result<Mor> {
    let source = tensor_obj(&tensor_obj(x, y)?, z)?;
    let target = tensor_obj(x, &tensor_obj(y, z)?)?;
    let b = x.backend();
    let field = b.field();
    let blocks = match b.presentation() {
        Presentation::Matvec { blocks } => blocks.clone(),
        _ => {
            let maps = source.dims().iter().map(|&d| Mat::identity(field, d)).collect();
            return Mor::new(&source, &target, maps);
        }
    };
    let (xd, yd, zd) = (x.dims(), y.dims(), z.dims());
    let maps = (0..b.vertex_count())
        .map(|v| {
            let (blk, i, l) = matvec_cell(&blocks, v);
            let n = blocks[blk];
            let cell = |p: usize, q: usize| b.matvec_vertex(blk, p, q);
            let mut perm = Mat::zeros(field, target.dims()[v], source.dims()[v]);
            // target offsets: X_ij ⊗ (⊕_k Y_jk ⊗ Z_kl), stacked by j
            let yz = |j: usize| (0..n).map(|k| yd[cell(j, k)] * zd[cell(k, l)]).sum::<usize>();
            let t_off: Vec<usize> = (0..n)
                .scan(0, |acc, j| {
                    let o = *acc;
                    *acc += xd[cell(i, j)] * yz(j);
                    Some(o)
                })
                .collect();
            let mut s = 0;
            for k in 0..n {
                let zk = zd[cell(k, l)];
                for j in 0..n {
                    let yjk = yd[cell(j, k)];
                    let inner: usize = (0..k).map(|kk| yd[cell(j, kk)] * zd[cell(kk, l)]).sum();
                    for xi in 0..xd[cell(i, j)] {
                        for yi in 0..yjk {
                            for zi in 0..zk {
                                let t = t_off[j] + xi * yz(j) + inner + yi * zk + zi;
                                perm.set(t, s, field.one());
                                s += 1;
                            }
                        }
                    }
                }
            }
            perm
        })
        .collect();
    Mor::new(&source, &target, maps)
}

/// `λ_X: 1⊗X -> X`.
pub fn left_unitor(x: &Obj) -> Result<Mor> {
    let one = unit(x.backend())?;
    let source = tensor_obj(&one, x)?;
    let maps = x.dims().iter().map(|&d| Mat::identity(x.field(), d)).collect();
    Mor::new(&source, x, maps)
}

/// `ρ_X: X⊗1 -> X`.
pub fn right_unitor(x: &Obj) -> Result<Mor> {
    let one = unit(x.backend())?;
    let source = tensor_obj(x, &one)?;
    let maps = x.dims().iter().map(|&d| Mat::identity(x.field(), d)).collect();
    Mor::new(&source, x, maps)
}

/// A dual object with its structure maps. For the left dual `ev: X*⊗X -> 1`
/// and `coev: 1 -> X⊗X*`; for the right dual `ev: X⊗*X -> 1` and
/// `coev: 1 -> *X⊗X`.
#[derive(Clone, Debug)]
pub struct DualData {
    pub object: Obj,
    pub dual: Obj,
    pub ev: Mor,
    pub coev: Mor,
}

fn dual_object(x: &Obj) -> Result<Obj> {
    let b = x.backend();
    require_tensor(b)?;
    match b.presentation() {
        Presentation::Matvec { blocks } => {
            let dims = (0..b.vertex_count())
                .map(|v| {
                    let (blk, i, j) = matvec_cell(blocks, v);
                    x.dims()[b.matvec_vertex(blk, j, i)]
                })
                .collect();
            Obj::new(b, dims, Vec::new())
        }
        _ => {
            let actions = x
                .actions()
                .iter()
                .map(|a| {
                    a.inverse()
                        .map(|m| m.transpose())
                        .ok_or_else(|| Error::InvalidObject("group action is not invertible".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Obj::trusted(b, x.dims().to_vec(), actions))
        }
    }
}

/// Trace pairing `A⊗B -> 1` where every stacked summand at a unit vertex is
/// `V ⊗ V'` with `dim V = dim V'`.
fn pairing(a: &Obj, bo: &Obj) -> Result<Mor> {
    let source = tensor_obj(a, bo)?;
    let one = unit(a.backend())?;
    let field = a.field();
    let maps = (0..one.dims().len())
        .map(|v| {
            let mut m = Mat::zeros(field, one.dims()[v], source.dims()[v]);
            if one.dims()[v] == 1 {
                let mut off = 0;
                for (u, w) in components(a.backend(), v) {
                    let (da, db) = (a.dims()[u], bo.dims()[w]);
                    debug_assert_eq!(da, db);
                    for t in 0..da {
                        m.set(0, off + t * db + t, field.one());
                    }
                    off += da * db;
                }
            }
            m
        })
        .collect();
    Mor::new(&source, &one, maps)
}

fn copairing(a: &Obj, bo: &Obj) -> Result<Mor> {
    let p = pairing(a, bo)?;
    let maps = p.maps().iter().map(Mat::transpose).collect();
    Mor::new(p.target(), p.source(), maps)
}

/// Left dual: contragredient for groups, transposed grid for matvec.
pub fn left_dual(x: &Obj) -> Result<DualData> {
    let dual = dual_object(x)?;
    Ok(DualData {
        ev: pairing(&dual, x)?,
        coev: copairing(x, &dual)?,
        object: x.clone(),
        dual,
    })
}

pub fn right_dual(x: &Obj) -> Result<DualData> {
    let dual = dual_object(x)?;
    Ok(DualData {
        ev: pairing(x, &dual)?,
        coev: copairing(&dual, x)?,
        object: x.clone(),
        dual,
    })
}

/// Inverse of the associator (a permutation, so its transpose).
pub fn associator_inv(x: &Obj, y: &Obj, z: &Obj) -> Result<Mor> {
    let a = associator(x, y, z)?;
    let maps = a.maps().iter().map(Mat::transpose).collect();
    Mor::new(a.target(), a.source(), maps)
}

/// The two zigzag composites of a left dual, `X -> X` and `X* -> X*`.
pub fn left_zigzags(d: &DualData) -> Result<(Mor, Mor)> {
    let (x, xs) = (&d.object, &d.dual);
    let first = tensor_mor(&x.identity(), &d.ev)?
        .after(&associator(x, xs, x)?)?
        .after(&tensor_mor(&d.coev, &x.identity())?)?;
    let second = tensor_mor(&d.ev, &xs.identity())?
        .after(&associator_inv(xs, x, xs)?)?
        .after(&tensor_mor(&xs.identity(), &d.coev)?)?;
    Ok((first, second))
}

/// The two zigzag composites of a right dual.
pub fn right_zigzags(d: &DualData) -> Result<(Mor, Mor)> {
    let (x, xs) = (&d.object, &d.dual);
    let first = tensor_mor(&d.ev, &x.identity())?
        .after(&associator_inv(x, xs, x)?)?
        .after(&tensor_mor(&x.identity(), &d.coev)?)?;
    let second = tensor_mor(&xs.identity(), &d.ev)?
        .after(&associator(xs, x, xs)?)?
        .after(&tensor_mor(&d.coev, &xs.identity())?)?;
    Ok((first, second))
}

/// Both sides of the pentagon for `(W, X, Y, Z)`.
pub fn pentagon(w: &Obj, x: &Obj, y: &Obj, z: &Obj) -> Result<(Mor, Mor)> {
    let lhs = associator(w, x, &tensor_obj(y, z)?)?.after(&associator(&tensor_obj(w, x)?, y, z)?)?;
    let rhs = tensor_mor(&w.identity(), &associator(x, y, z)?)?
        .after(&associator(w, &tensor_obj(x, y)?, z)?)?
        .after(&tensor_mor(&associator(w, x, y)?, &z.identity())?)?;
    Ok((lhs, rhs))
}

/// Both sides of the triangle `(id ⊗ λ_Y) ∘ a_{X,1,Y} = ρ_X ⊗ id`.
pub fn triangle(x: &Obj, y: &Obj) -> Result<(Mor, Mor)> {
    let one = unit(x.backend())?;
    let lhs = tensor_mor(&x.identity(), &left_unitor(y)?)?.after(&associator(x, &one, y)?)?;
    let rhs = tensor_mor(&right_unitor(x)?, &y.identity())?;
    Ok((lhs, rhs))
}

/// `q1 ⊗ q2` in A/C: the tensor of the canonical representatives, read as
/// an element of the direct system for `(M1⊗M2, N1⊗N2)` at the index
/// `(c(M1)⊗c(M2), ker(p1⊗p2))`.
pub fn q_tensor(q1: &QMor, q2: &QMor) -> Result<QMor> {
    let c = q1.serre();
    if c != q2.serre() {
        return Err(Error::ComposeError("different Serre subcategories".into()));
    }
    require_tensor(c.backend())?;
    if !crate::ideal::is_tensor_ideal(c)? {
        return Err(Error::NotTensorIdeal(format!("{:?}", c.labels())));
    }
    q_tensor_unchecked(c, q1, q2)
}

pub(crate) fn q_tensor_unchecked(c: &SerreSpec, q1: &QMor, q2: &QMor) -> Result<QMor> {
    let (s1, s2) = (q1.source_data(), q2.source_data());
    let (t1, t2) = (q1.target_data(), q2.target_data());
    let inc = tensor_mor(s1.reject.inclusion(), s2.reject.inclusion())?;
    let proj = tensor_mor(&t1.reduced.proj, &t2.reduced.proj)?;
    let rep = tensor_mor(q1.rep(), q2.rep())?;
    from_system_mono(c, &inc, &proj, &rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abcat::{find_isomorphism, hom_basis, is_isomorphic};
    use crate::field::Field;

    #[test]
    fn sign_squared_is_trivial() {
        let b = Backend::repz2();
        let w1 = b.simple(b.simple_index("W1").unwrap());
        let w2 = b.simple(b.simple_index("W2").unwrap());
        assert!(is_isomorphic(&tensor_obj(&w1, &w1).unwrap(), &w2).unwrap());
        assert_eq!(unit(&b).unwrap(), w2);
        assert!(is_isomorphic(&left_dual(&w1).unwrap().dual, &w1).unwrap());
    }

    #[test]
    fn matvec_cell_products() {
        let b = Backend::matvec(Field::Rational, vec![2]).unwrap();
        let e = |l: &str| b.simple(b.simple_index(l).unwrap());
        assert_eq!(tensor_obj(&e("E1_12"), &e("E1_21")).unwrap(), e("E1_11"));
        assert!(tensor_obj(&e("E1_12"), &e("E1_12")).unwrap().is_zero());
        assert_eq!(left_dual(&e("E1_12")).unwrap().dual, e("E1_21"));
        let one = unit(&b).unwrap();
        assert_eq!(hom_basis(&one, &one).unwrap().len(), 2);
    }

    #[test]
    fn unit_grid_for_two_blocks() {
        let b = Backend::matvec(Field::Rational, vec![2, 1]).unwrap();
        let one = unit(&b).unwrap();
        assert_eq!(one.grid().unwrap(), vec![vec![vec![1, 0], vec![0, 1]], vec![vec![1]]]);
    }

    #[test]
    fn unit_laws_literal() {
        let b = Backend::matvec(Field::Prime(3), vec![2, 1]).unwrap();
        let x = Obj::matvec_grid(&b, &[vec![vec![1, 2], vec![0, 1]], vec![vec![2]]]).unwrap();
        let one = unit(&b).unwrap();
        assert_eq!(tensor_obj(&one, &x).unwrap(), x);
        assert_eq!(tensor_obj(&x, &one).unwrap(), x);
        assert!(find_isomorphism(&tensor_obj(&x, &one).unwrap(), &x).unwrap().is_some());
    }

    #[test]
    fn matvec_coherence() {
        let b = Backend::matvec(Field::Prime(2), vec![2]).unwrap();
        let x = Obj::matvec_grid(&b, &[vec![vec![1, 2], vec![1, 0]]]).unwrap();
        let y = Obj::matvec_grid(&b, &[vec![vec![0, 1], vec![2, 1]]]).unwrap();
        let z = Obj::matvec_grid(&b, &[vec![vec![1, 1], vec![1, 1]]]).unwrap();
        let (l, r) = pentagon(&x, &y, &z, &x).unwrap();
        assert_eq!(l, r);
        let (l, r) = triangle(&x, &y).unwrap();
        assert_eq!(l, r);
        for d in [left_dual(&x).unwrap(), right_dual(&x).unwrap()] {
            let (a, c) = if d.ev.source() == &tensor_obj(&d.dual, &x).unwrap() {
                left_zigzags(&d).unwrap()
            } else {
                right_zigzags(&d).unwrap()
            };
            assert_eq!(a, x.identity());
            assert_eq!(c, d.dual.identity());
        }
    }

    #[test]
    fn group_zigzags() {
        let b = Backend::group_algebra(Field::Prime(7), vec![3], None).unwrap();
        let g = Mat::from_ints(b.field(), &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let reg = Obj::new(&b, vec![3], vec![g]).unwrap();
        let d = left_dual(&reg).unwrap();
        let (a, c) = left_zigzags(&d).unwrap();
        assert_eq!(a, reg.identity());
        assert_eq!(c, d.dual.identity());
        let d = right_dual(&reg).unwrap();
        let (a, c) = right_zigzags(&d).unwrap();
        assert_eq!(a, reg.identity());
        assert_eq!(c, d.dual.identity());
    }

    #[test]
    fn path_algebra_has_no_tensor() {
        let b = Backend::path_a2(Field::Prime(2));
        assert!(matches!(unit(&b), Err(Error::RequirementUnmet(_))));
    }
}
