//! Random objects, morphisms and subobjects for the property suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::abcat::{hom_basis, quotient_object, spin_submodule, Backend, Mor, Obj, Presentation, QuotientObj, SubObj};
use crate::error::Result;
use crate::exactlin::Mat;
use crate::field::{Field, FieldElem};

/// Size caps for random objects.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    /// Total dimension for path and group objects.
    pub total: usize,
    /// Per-cell dimension for matvec objects.
    pub cell: usize,
}

impl Caps {
    pub const GENERAL: Caps = Caps { total: 6, cell: 2 };
    pub const TENSOR: Caps = Caps { total: 4, cell: 2 };
    pub const ORACLE: Caps = Caps { total: 3, cell: 1 };
}

pub fn scalar(field: Field, rng: &mut ChaCha8Rng) -> FieldElem {
    match field {
        Field::Prime(p) => field.int(rng.gen_range(0..p.min(1 << 20)) as i64),
        Field::Rational => field.int(rng.gen_range(-3..=3)),
    }
}

pub fn nonzero_scalar(field: Field, rng: &mut ChaCha8Rng) -> FieldElem {
    loop {
        let x = scalar(field, rng);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn matrix(field: Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Mat {
    let mut m = Mat::zeros(field, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, scalar(field, rng));
        }
    }
    m
}

fn invertible(field: Field, n: usize, rng: &mut ChaCha8Rng) -> (Mat, Mat) {
    loop {
        let m = matrix(field, n, n, rng);
        if let Some(inv) = m.inverse() {
            return (m, inv);
        }
    }
}

/// Random dimension vector with the given total spread over `vertices`.
fn spread(total: usize, vertices: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut dims = vec![0; vertices];
    for _ in 0..total {
        dims[rng.gen_range(0..vertices)] += 1;
    }
    dims
}

/// A random object within `caps`; may be zero.
pub fn object(b: &Backend, caps: Caps, rng: &mut ChaCha8Rng) -> Result<Obj> {
    let field = b.field();
    match b.presentation() {
        Presentation::Path { .. } => {
            if b.vertex_count() == 0 {
                return Ok(Obj::zero(b));
            }
            let total = rng.gen_range(0..=caps.total);
            let dims = spread(total, b.vertex_count(), rng);
            let actions = b
                .arrows()
                .iter()
                .map(|&(s, t)| matrix(field, dims[t], dims[s], rng))
                .collect();
            Obj::new(b, dims, actions)
        }
        Presentation::Group { .. } => {
            // a sum of characters in a random basis
            let d = rng.gen_range(0..=caps.total);
            let chars: Vec<usize> = (0..d).map(|_| rng.gen_range(0..b.simple_count())).collect();
            let (p, pinv) = invertible(field, d, rng);
            let actions = (0..b.arrows().len())
                .map(|a| {
                    let mut diag = Mat::zeros(field, d, d);
                    for (k, &c) in chars.iter().enumerate() {
                        let s = &b.simples()[c];
                        let x = s.loops.iter().find(|(arr, _)| *arr == a).map(|(_, x)| x.clone());
                        diag.set(k, k, x.unwrap_or_else(|| field.one()));
                    }
                    Ok(p.mul(&diag)?.mul(&pinv)?)
                })
                .collect::<Result<Vec<_>>>()?;
            Obj::new(b, vec![d], actions)
        }
        Presentation::Matvec { .. } => {
            let dims = (0..b.vertex_count()).map(|_| rng.gen_range(0..=caps.cell)).collect();
            Obj::new(b, dims, Vec::new())
        }
    }
}

/// A nonzero random object (falls back to a random simple).
pub fn nonzero_object(b: &Backend, caps: Caps, rng: &mut ChaCha8Rng) -> Result<Obj> {
    for _ in 0..8 {
        let x = object(b, caps, rng)?;
        if !x.is_zero() {
            return Ok(x);
        }
    }
    Ok(b.simple(rng.gen_range(0..b.simple_count())))
}

/// A random element of `Hom(M, N)` as a combination of the hom basis.
pub fn morphism(m: &Obj, n: &Obj, rng: &mut ChaCha8Rng) -> Result<Mor> {
    let basis = hom_basis(m, n)?;
    combination(m, n, &basis, rng)
}

pub fn combination(m: &Obj, n: &Obj, basis: &[Mor], rng: &mut ChaCha8Rng) -> Result<Mor> {
    let coeffs: Vec<FieldElem> = basis.iter().map(|_| scalar(m.field(), rng)).collect();
    Mor::combination(m, n, basis, &coeffs)
}

/// The subobject generated by up to two random homogeneous vectors.
pub fn subobject(m: &Obj, rng: &mut ChaCha8Rng) -> Result<SubObj> {
    let field = m.field();
    let k = rng.gen_range(0..=2);
    let offsets = m.offsets();
    let support: Vec<usize> = (0..m.dims().len()).filter(|&v| m.dims()[v] > 0).collect();
    let mut vecs = Mat::zeros(field, m.dim(), k);
    for c in 0..k {
        if let Some(&v) = support.choose(rng) {
            for r in 0..m.dims()[v] {
                vecs.set(offsets[v] + r, c, scalar(field, rng));
            }
        }
    }
    spin_submodule(m, &vecs)
}

/// A random subobject of `m` contained in `within`.
pub fn subobject_of(within: &SubObj, rng: &mut ChaCha8Rng) -> Result<SubObj> {
    let inner = subobject(within.obj(), rng)?;
    inner.push_forward(within.inclusion())
}

/// A random subobject of `m` containing `floor`.
pub fn subobject_over(floor: &SubObj, rng: &mut ChaCha8Rng) -> Result<SubObj> {
    floor.sum(&subobject(floor.parent(), rng)?)
}

pub fn quotient(m: &Obj, rng: &mut ChaCha8Rng) -> Result<QuotientObj> {
    let s = subobject(m, rng)?;
    quotient_object(m, &s)
}
