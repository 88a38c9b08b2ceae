//! Two-sided Serre tensor-ideals of the tensor backends.
//!
//! The unit splits as `1 = ⊕ 1_i` along the primitive idempotents of the
//! commutative algebra `End(1)`. Every simple sits in exactly one component
//! `1_i ⊗ A ⊗ 1_j`, and the ideals are exactly the subcategories spanned by
//! components `(i, j)` with `i, j ∈ J` for index sets `J` that no nonzero
//! component leaves.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::abcat::{composition_factors, hom_basis, identify_simple, image, Backend, Mor, Obj, Presentation, SubObj};
use crate::error::{Error, Result};
use crate::exactlin::{self, Mat};
use crate::field::{Field, FieldElem};
use crate::monoidal::{left_dual, tensor_mor, tensor_obj, unit};
use crate::serre::SerreSpec;

const MAX_PRIME_ROOT_SEARCH: u64 = 65_536;
const MAX_RATIONAL_ROOT_BOUND: u64 = 1_000_000_000_000;

/// A summand `1_i` of the unit with its idempotent `e_i ∈ End(1)`.
#[derive(Clone, Debug)]
pub struct UnitSummand {
    pub idempotent: Mor,
    pub object: Obj,
    pub simple: usize,
}

fn flatten(m: &Mor) -> Mat {
    let v = m.flatten();
    let field = m.field();
    Mat::from_rows(field, 1, v.into_iter().map(|x| vec![x]).collect()).expect("column")
}

fn poly_eval(coeffs: &[FieldElem], x: &FieldElem) -> FieldElem {
    coeffs
        .iter()
        .rev()
        .fold(x.field().zero(), |acc, c| &(&acc * x) + c)
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs();
    if n > BigInt::from(MAX_RATIONAL_ROOT_BOUND) {
        return Err(Error::BackendContract("End(1) polynomial coefficients too large for root search".into()));
    }
    let n = n.to_u64().expect("bounded");
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Ok(out)
}

/// Distinct roots of `Σ c_i t^i` in the field.
fn roots(coeffs: &[FieldElem], field: Field) -> Result<Vec<FieldElem>> {
    match field {
        Field::Prime(p) => {
            if p > MAX_PRIME_ROOT_SEARCH {
                return Err(Error::BackendContract(format!(
                    "idempotent splitting over GF({p}) needs p <= {MAX_PRIME_ROOT_SEARCH}"
                )));
            }
            Ok((0..p)
                .map(|a| field.int(a as i64))
                .filter(|a| poly_eval(coeffs, a).is_zero())
                .collect())
        }
        Field::Rational => {
            // clear denominators, then the rational root test
            let rats: Vec<BigRational> = coeffs
                .iter()
                .map(|c| c.as_rational().expect("rational").clone())
                .collect();
            let lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            let ints: Vec<BigInt> = rats
                .iter()
                .map(|r| (r * BigRational::from_integer(lcm.clone())).to_integer())
                .collect();
            let mut out = Vec::new();
            let shift = ints.iter().position(|a| !a.is_zero()).unwrap_or(0);
            if shift > 0 {
                out.push(field.zero());
            }
            let low = &ints[shift];
            let high = ints.last().expect("nonempty");
            for p in divisors(low)? {
                for q in divisors(high)? {
                    for sign in [1, -1] {
                        let cand = field
                            .frac(&(BigInt::from(sign) * &p), &q)
                            .expect("nonzero denominator");
                        if !out.contains(&cand) && poly_eval(coeffs, &cand).is_zero() {
                            out.push(cand);
                        }
                    }
                }
            }
            Ok(out)
        }
    }
}

/// Splits `e` along the eigenvalues of `x ∈ eAe`; returns `[e]` if `x` is a
/// multiple of `e`.
fn split_idempotent(e: &Mor, x: &Mor) -> Result<Vec<Mor>> {
    let field = e.field();
    let mut powers = vec![e.clone()];
    let mut cols = flatten(e);
    let coeffs = loop {
        let next = x.after(powers.last().expect("nonempty"))?;
        let v = flatten(&next);
        if let Some(sol) = exactlin::solve(&cols, &v)? {
            // minimal polynomial t^k - Σ sol_i t^i
            let mut c: Vec<FieldElem> = (0..sol.rows()).map(|i| -sol.get(i, 0)).collect();
            c.push(field.one());
            break c;
        }
        cols = cols.hstack(&v)?;
        powers.push(next);
    };
    let degree = coeffs.len() - 1;
    if degree <= 1 {
        return Ok(vec![e.clone()]);
    }
    let rs = roots(&coeffs, field)?;
    if rs.len() != degree {
        return Err(Error::BackendContract(
            "End(1) is not split semisimple over the ground field".into(),
        ));
    }
    rs.iter()
        .map(|lam| {
            let mut acc = e.clone();
            for mu in rs.iter().filter(|mu| *mu != lam) {
                let factor = x.sub(&e.scale(mu))?;
                let denom = (lam - mu).inv().expect("distinct roots");
                acc = factor.after(&acc)?.scale(&denom);
            }
            Ok(acc)
        })
        .collect()
}

/// Primitive orthogonal idempotents of `End(1)` and their images, ordered by
/// the first vertex each image occupies.
pub fn unit_decomposition(b: &Backend) -> Result<Vec<UnitSummand>> {
    let one = unit(b)?;
    let basis = hom_basis(&one, &one)?;
    for (i, x) in basis.iter().enumerate() {
        for y in &basis[i + 1..] {
            if x.after(y)? != y.after(x)? {
                return Err(Error::BackendContract("End(1) is not commutative".into()));
            }
        }
    }
    let mut idems = if one.is_zero() { Vec::new() } else { vec![one.identity()] };
    'outer: loop {
        for (k, e) in idems.iter().enumerate() {
            for bas in &basis {
                let x = e.after(bas)?.after(e)?;
                let parts = split_idempotent(e, &x)?;
                if parts.len() > 1 {
                    idems.splice(k..=k, parts);
                    continue 'outer;
                }
            }
        }
        break;
    }
    let mut out = idems
        .into_iter()
        .map(|e| {
            let object = image(&e)?.obj().clone();
            let simple = identify_simple(&object)
                .ok_or_else(|| Error::BackendContract("a unit summand is not simple".into()))?;
            Ok(UnitSummand {
                idempotent: e,
                object,
                simple,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by_key(|s| (s.object.dims().iter().position(|&d| d > 0), s.simple));
    let distinct: BTreeSet<usize> = out.iter().map(|s| s.simple).collect();
    if distinct.len() != out.len() {
        return Err(Error::BackendContract("unit summands are not pairwise non-isomorphic".into()));
    }
    Ok(out)
}

/// The component decomposition `A_{i,j} = 1_i ⊗ A ⊗ 1_j` of the simples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentGrid {
    /// Simple index of each unit summand `1_i`.
    pub summands: Vec<usize>,
    /// `cells[i][j]`: simples in `A_{i,j}`.
    pub cells: Vec<Vec<Vec<usize>>>,
    /// The cell of every simple.
    pub cell_of: Vec<(usize, usize)>,
}

impl ComponentGrid {
    pub fn size(&self) -> usize {
        self.summands.len()
    }

    pub fn is_nonzero(&self, i: usize, j: usize) -> bool {
        !self.cells[i][j].is_empty()
    }
}

pub fn component_grid(b: &Backend) -> Result<ComponentGrid> {
    let summands = unit_decomposition(b)?;
    component_grid_from(b, &summands)
}

fn component_grid_from(b: &Backend, summands: &[UnitSummand]) -> Result<ComponentGrid> {
    let n = summands.len();
    let mut cells = vec![vec![Vec::new(); n]; n];
    let mut cell_of = Vec::with_capacity(b.simple_count());
    for s in 0..b.simple_count() {
        let simple = b.simple(s);
        let mut found = Vec::new();
        for (i, ui) in summands.iter().enumerate() {
            let left = tensor_obj(&ui.object, &simple)?;
            if left.is_zero() {
                continue;
            }
            for (j, uj) in summands.iter().enumerate() {
                if !tensor_obj(&left, &uj.object)?.is_zero() {
                    found.push((i, j));
                }
            }
        }
        match found.as_slice() {
            [(i, j)] => {
                cells[*i][*j].push(s);
                cell_of.push((*i, *j));
            }
            _ => {
                return Err(Error::BackendContract(format!(
                    "simple {} lies in {} components",
                    b.simple_label(s),
                    found.len()
                )))
            }
        }
    }
    Ok(ComponentGrid {
        summands: summands.iter().map(|s| s.simple).collect(),
        cells,
        cell_of,
    })
}

/// True iff `X⊗Y` and `Y⊗X` lie in C for all simples X and all simples Y of C.
pub fn is_tensor_ideal(c: &SerreSpec) -> Result<bool> {
    let b = c.backend();
    unit(b)?;
    for &y in c.simples() {
        let ys = b.simple(y);
        for x in 0..b.simple_count() {
            let xs = b.simple(x);
            if !c.member(&tensor_obj(&xs, &ys)?)? || !c.member(&tensor_obj(&ys, &xs)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Smallest tensor-ideal containing the given simples.
pub fn tensor_ideal_closure(b: &Backend, simples: &BTreeSet<usize>) -> Result<SerreSpec> {
    unit(b)?;
    let mut current = simples.clone();
    let mut frontier: Vec<usize> = current.iter().copied().collect();
    while let Some(y) = frontier.pop() {
        let ys = b.simple(y);
        for x in 0..b.simple_count() {
            let xs = b.simple(x);
            for prod in [tensor_obj(&xs, &ys)?, tensor_obj(&ys, &xs)?] {
                for f in composition_factors(&prod)? {
                    if current.insert(f) {
                        frontier.push(f);
                    }
                }
            }
        }
    }
    SerreSpec::new(b, current)
}

/// A two-sided Serre tensor-ideal given by its index set `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealDescriptor {
    pub j: Vec<usize>,
    pub serre: SerreSpec,
}

/// Cells `(i,k)` and `(k,i)` vanish for `i ∈ J`, `k ∉ J`.
pub fn satisfies_vanishing(grid: &ComponentGrid, j: &BTreeSet<usize>) -> bool {
    j.iter().all(|&i| {
        (0..grid.size())
            .filter(|k| !j.contains(k))
            .all(|k| !grid.is_nonzero(i, k) && !grid.is_nonzero(k, i))
    })
}

fn descriptor(b: &Backend, grid: &ComponentGrid, j: &BTreeSet<usize>) -> Result<IdealDescriptor> {
    let simples = (0..b.simple_count()).filter(|&s| {
        let (p, q) = grid.cell_of[s];
        j.contains(&p) && j.contains(&q)
    });
    Ok(IdealDescriptor {
        j: j.iter().copied().collect(),
        serre: SerreSpec::new(b, simples)?,
    })
}

/// All tensor-ideals, as index sets `J` in lexicographic order.
pub fn enumerate_tensor_ideals(b: &Backend) -> Result<Vec<IdealDescriptor>> {
    let grid = component_grid(b)?;
    let n = grid.size();
    if n >= usize::BITS as usize {
        return Err(Error::RequirementUnmet(format!("{n} unit summands are too many to enumerate")));
    }
    let mut out = (0..1usize << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect::<BTreeSet<_>>())
        .filter(|j| satisfies_vanishing(&grid, j))
        .map(|j| descriptor(b, &grid, &j))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|x, y| x.j.cmp(&y.j));
    Ok(out)
}

/// Every simple-subset that is a tensor-ideal, by exhaustive filtering.
pub fn brute_force_tensor_ideals(b: &Backend) -> Result<Vec<BTreeSet<usize>>> {
    let n = b.simple_count();
    if n > 16 {
        return Err(Error::RequirementUnmet(format!("{n} simples are too many for brute force")));
    }
    let mut out = Vec::new();
    for mask in 0..1usize << n {
        let set: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if is_tensor_ideal(&SerreSpec::new(b, set.clone())?)? {
            out.push(set);
        }
    }
    Ok(out)
}

/// `J = {i : 1_i ∈ C}`.
pub fn index_set(c: &SerreSpec, grid: &ComponentGrid) -> BTreeSet<usize> {
    (0..grid.size())
        .filter(|&i| c.contains_simple(grid.summands[i]))
        .collect()
}

/// A simple `B ∈ C` with `B*⊗B ∉ C`, if any.
pub fn monoidal_obstruction(c: &SerreSpec) -> Result<Option<usize>> {
    let b = c.backend();
    for &s in c.simples() {
        let x = b.simple(s);
        let d = left_dual(&x)?;
        if !c.member(&tensor_obj(&d.dual, &x)?)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// The model `⊕_{i,j∉J} A_{i,j}` of `A/C` as a backend in its own right.
#[derive(Clone, Debug)]
pub struct QuotientBackend {
    pub source: Backend,
    pub ideal: IdealDescriptor,
    pub backend: Backend,
    /// New index of every old simple, or `None` if it lies in C.
    pub simple_map: Vec<Option<usize>>,
    /// New index of every old unit summand, or `None` if it is in `J`.
    pub summand_map: Vec<Option<usize>>,
    idempotent: Mor,
}

pub fn build_quotient_backend(b: &Backend, ideal: &IdealDescriptor) -> Result<QuotientBackend> {
    if ideal.serre.backend() != b {
        return Err(Error::BackendMismatch(b.name().into(), ideal.serre.backend().name().into()));
    }
    if !is_tensor_ideal(&ideal.serre)? {
        return Err(Error::NotTensorIdeal(format!("{:?}", ideal.serre.labels())));
    }
    let summands = unit_decomposition(b)?;
    let grid = component_grid_from(b, &summands)?;
    let j: BTreeSet<usize> = ideal.j.iter().copied().collect();
    if !satisfies_vanishing(&grid, &j) || index_set(&ideal.serre, &grid) != j {
        return Err(Error::NotTensorIdeal(format!("index set {:?} does not match the ideal", ideal.j)));
    }
    let field = b.field();
    let (backend, simple_map) = match b.presentation() {
        Presentation::Matvec { blocks } => {
            let kept: Vec<usize> = (0..blocks.len())
                .filter(|&blk| !ideal.serre.contains_simple(b.matvec_vertex(blk, 0, 0)))
                .collect();
            let nb = Backend::matvec(field, kept.iter().map(|&k| blocks[k]).collect())?;
            let mut map = vec![None; b.simple_count()];
            for (new_blk, &blk) in kept.iter().enumerate() {
                let n = blocks[blk];
                for p in 0..n {
                    for q in 0..n {
                        map[b.matvec_vertex(blk, p, q)] = Some(nb.matvec_vertex(new_blk, p, q));
                    }
                }
            }
            (nb, map)
        }
        Presentation::Group { .. } if ideal.serre.is_zero() => (b.clone(), (0..b.simple_count()).map(Some).collect()),
        Presentation::Group { .. } if ideal.serre.simples().len() == b.simple_count() => {
            (Backend::matvec(field, Vec::new())?, vec![None; b.simple_count()])
        }
        _ => {
            return Err(Error::BackendContract(format!(
                "no quotient model for `{}` by {:?}",
                b.name(),
                ideal.serre.labels()
            )))
        }
    };
    let new_summands = unit_decomposition(&backend)?;
    let summand_map = summands
        .iter()
        .map(|s| {
            simple_map[s.simple].map(|ns| {
                new_summands
                    .iter()
                    .position(|u| u.simple == ns)
                    .expect("surviving unit summand")
            })
        })
        .collect();
    let one = unit(b)?;
    let mut e = Mor::zero(&one, &one);
    for (i, s) in summands.iter().enumerate() {
        if !j.contains(&i) {
            e = e.add(&s.idempotent)?;
        }
    }
    Ok(QuotientBackend {
        source: b.clone(),
        ideal: ideal.clone(),
        backend,
        simple_map,
        summand_map,
        idempotent: e,
    })
}

impl QuotientBackend {
    /// `X' = ⊕_{i,j∉J} 1_i ⊗ X ⊗ 1_j` as a subobject of `X`, cut out by the
    /// idempotent `e ⊗ id_X ⊗ e` with `e = Σ_{i∉J} e_i`.
    pub fn surviving_part(&self, x: &Obj) -> Result<SubObj> {
        let cut = tensor_mor(&tensor_mor(&self.idempotent, &x.identity())?, &self.idempotent)?;
        let cut = Mor::new(x, x, cut.maps().to_vec())?;
        image(&cut)
    }

    /// `X'` as an object of the model backend.
    pub fn to_model(&self, x: &Obj) -> Result<Obj> {
        if x.backend() != &self.source {
            return Err(Error::BackendMismatch(self.source.name().into(), x.backend().name().into()));
        }
        match self.source.presentation() {
            Presentation::Matvec { .. } => {
                let mut dims = vec![0; self.backend.vertex_count()];
                for (s, m) in self.simple_map.iter().enumerate() {
                    if let Some(ns) = m {
                        dims[*ns] = x.dims()[s];
                    }
                }
                Obj::new(&self.backend, dims, Vec::new())
            }
            _ if self.backend == self.source => Ok(x.clone()),
            _ => Ok(Obj::zero(&self.backend)),
        }
    }
}

/// The image of `C' ⊇ C` in the model of `A/C`: index set `J' \ J`,
/// re-indexed and re-validated there.
pub fn ideal_image_in_quotient(q: &QuotientBackend, c_prime: &IdealDescriptor) -> Result<IdealDescriptor> {
    if c_prime.serre.backend() != &q.source {
        return Err(Error::BackendMismatch(q.source.name().into(), c_prime.serre.backend().name().into()));
    }
    if !is_tensor_ideal(&c_prime.serre)? {
        return Err(Error::NotTensorIdeal(format!("{:?}", c_prime.serre.labels())));
    }
    let j_new: BTreeSet<usize> = c_prime
        .j
        .iter()
        .filter_map(|&i| q.summand_map.get(i).copied().flatten())
        .collect();
    let grid = component_grid(&q.backend)?;
    if !satisfies_vanishing(&grid, &j_new) {
        return Err(Error::NotTensorIdeal(format!("image index set {j_new:?} fails the vanishing condition")));
    }
    let image = descriptor(&q.backend, &grid, &j_new)?;
    if !is_tensor_ideal(&image.serre)? {
        return Err(Error::NotTensorIdeal(format!("{:?}", image.serre.labels())));
    }
    Ok(image)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mv(blocks: Vec<usize>) -> Backend {
        Backend::matvec(Field::Rational, blocks).unwrap()
    }

    #[test]
    fn repz2_ideals_are_trivial() {
        let b = Backend::repz2();
        let w1 = b.simple_index("W1").unwrap();
        let c = SerreSpec::new(&b, [w1]).unwrap();
        assert!(!is_tensor_ideal(&c).unwrap());
        assert_eq!(tensor_ideal_closure(&b, &[w1].into()).unwrap(), SerreSpec::full(&b));
        let ideals = enumerate_tensor_ideals(&b).unwrap();
        assert_eq!(ideals.len(), 2);
        assert!(ideals[0].serre.is_zero());
        assert_eq!(ideals[1].serre, SerreSpec::full(&b));
        assert_eq!(monoidal_obstruction(&c).unwrap(), Some(w1));
        assert_eq!(monoidal_obstruction(&SerreSpec::zero(&b)).unwrap(), None);
    }

    #[test]
    fn matvec_unit_summands() {
        assert_eq!(unit_decomposition(&mv(vec![2])).unwrap().len(), 2);
        assert_eq!(unit_decomposition(&mv(vec![2, 1])).unwrap().len(), 3);
        assert_eq!(unit_decomposition(&Backend::repz2()).unwrap().len(), 1);
        let gf = Backend::matvec(Field::Prime(5), vec![3, 1]).unwrap();
        assert_eq!(unit_decomposition(&gf).unwrap().len(), 4);
    }

    #[test]
    fn matvec_grid_is_block_diagonal() {
        let b = mv(vec![2, 1]);
        let g = component_grid(&b).unwrap();
        let nz: Vec<Vec<bool>> = (0..3).map(|i| (0..3).map(|j| g.is_nonzero(i, j)).collect()).collect();
        assert_eq!(
            nz,
            vec![vec![true, true, false], vec![true, true, false], vec![false, false, true]]
        );
        let e12 = b.simple_index("E1_12").unwrap();
        assert_eq!(g.cell_of[e12], (0, 1));
    }

    #[test]
    fn matvec_two_one_has_four_ideals() {
        let b = mv(vec![2, 1]);
        let ideals = enumerate_tensor_ideals(&b).unwrap();
        let js: Vec<Vec<usize>> = ideals.iter().map(|i| i.j.clone()).collect();
        assert_eq!(js, vec![vec![], vec![0, 1], vec![0, 1, 2], vec![2]]);
        let brute = brute_force_tensor_ideals(&b).unwrap();
        let mut listed: Vec<BTreeSet<usize>> = ideals.iter().map(|i| i.serre.simples().clone()).collect();
        listed.sort();
        let mut brute_sorted = brute.clone();
        brute_sorted.sort();
        assert_eq!(listed, brute_sorted);
    }

    #[test]
    fn closure_of_an_off_diagonal_cell() {
        let b = mv(vec![2, 1]);
        let e12 = b.simple_index("E1_12").unwrap();
        let c = tensor_ideal_closure(&b, &[e12].into()).unwrap();
        assert_eq!(c.labels(), vec!["E1_11", "E1_12", "E1_21", "E1_22"]);
    }

    #[test]
    fn quotient_by_first_block() {
        let b = mv(vec![2, 1]);
        let ideals = enumerate_tensor_ideals(&b).unwrap();
        let q = build_quotient_backend(&b, &ideals[1]).unwrap();
        assert_eq!(q.backend, mv(vec![1]));
        let x = Obj::matvec_grid(&b, &[vec![vec![1, 2], vec![0, 1]], vec![vec![3]]]).unwrap();
        let xp = q.surviving_part(&x).unwrap();
        assert_eq!(xp.dim(), 3);
        assert_eq!(q.to_model(&x).unwrap().dims(), &[3]);
        assert!(crate::quotient::q_iso(xp.obj(), &x, &ideals[1].serre).unwrap());
        let q0 = build_quotient_backend(&b, &ideals[0]).unwrap();
        assert_eq!(q0.backend, b);
    }

    #[test]
    fn image_of_a_larger_ideal() {
        let b = mv(vec![2, 1, 1]);
        let ideals = enumerate_tensor_ideals(&b).unwrap();
        let by_j = |j: &[usize]| ideals.iter().find(|i| i.j == j).unwrap().clone();
        let c = by_j(&[2]);
        let c_prime = by_j(&[2, 3]);
        let q = build_quotient_backend(&b, &c).unwrap();
        let img = ideal_image_in_quotient(&q, &c_prime).unwrap();
        assert_eq!(img.serre.labels(), vec!["E2_11"]);
        assert!(ideal_image_in_quotient(&q, &c).unwrap().serre.is_zero());
    }

    #[test]
    fn group_over_gf7_splits_and_is_trivially_ideal() {
        let b = Backend::group_algebra(Field::Prime(7), vec![3], None).unwrap();
        assert_eq!(enumerate_tensor_ideals(&b).unwrap().len(), 2);
        assert_eq!(brute_force_tensor_ideals(&b).unwrap().len(), 2);
        let full = enumerate_tensor_ideals(&b).unwrap().pop().unwrap();
        let q = build_quotient_backend(&b, &full).unwrap();
        assert_eq!(q.backend.vertex_count(), 0);
    }

    #[test]
    fn rational_roots() {
        let f = Field::Rational;
        // (t - 1/2)(t + 3) = t^2 + 5/2 t - 3/2
        let c = vec![f.frac(&(-3).into(), &2.into()).unwrap(), f.frac(&5.into(), &2.into()).unwrap(), f.one()];
        let r = roots(&c, f).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.contains(&f.int(-3)));
        assert!(r.contains(&f.frac(&1.into(), &2.into()).unwrap()));
    }
}
