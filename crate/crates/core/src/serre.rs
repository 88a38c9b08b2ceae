//! Serre subcategories presented by sets of simple objects, with the two
//! extremal subobjects that index the quotient Hom colimit: the torsion part
//! `t_C(M)` (largest subobject in C) and the reject `c_C(M)` (smallest
//! subobject with quotient in C).

use std::collections::BTreeSet;
use std::fmt;

use crate::abcat::{self, hom_basis, kernel, quotient_object, Backend, Mor, Obj, SubObj};
use crate::error::{Error, Result};

/// The full subcategory of objects whose composition factors all lie in
/// `simples`. Closed under subobjects, quotients and extensions.
#[derive(Clone, PartialEq, Eq)]
pub struct SerreSpec {
    backend: Backend,
    simples: BTreeSet<usize>,
}

impl fmt::Debug for SerreSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SerreSpec({}, {:?})", self.backend.name(), self.labels())
    }
}

impl SerreSpec {
    pub fn new(backend: &Backend, simples: impl IntoIterator<Item = usize>) -> Result<SerreSpec> {
        let simples: BTreeSet<usize> = simples.into_iter().collect();
        if let Some(&bad) = simples.iter().find(|&&s| s >= backend.simple_count()) {
            return Err(Error::UnknownLabel(format!("simple #{bad}")));
        }
        Ok(SerreSpec {
            backend: backend.clone(),
            simples,
        })
    }

    pub fn from_labels<S: AsRef<str>>(backend: &Backend, labels: &[S]) -> Result<SerreSpec> {
        let idx = labels
            .iter()
            .map(|l| backend.simple_index(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        SerreSpec::new(backend, idx)
    }

    /// The zero subcategory.
    pub fn zero(backend: &Backend) -> SerreSpec {
        SerreSpec {
            backend: backend.clone(),
            simples: BTreeSet::new(),
        }
    }

    /// The whole category.
    pub fn full(backend: &Backend) -> SerreSpec {
        SerreSpec {
            backend: backend.clone(),
            simples: (0..backend.simple_count()).collect(),
        }
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn simples(&self) -> &BTreeSet<usize> {
        &self.simples
    }

    pub fn contains_simple(&self, s: usize) -> bool {
        self.simples.contains(&s)
    }

    pub fn is_zero(&self) -> bool {
        self.simples.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        let mut l: Vec<String> = self
            .simples
            .iter()
            .map(|&s| self.backend.simple_label(s).to_string())
            .collect();
        l.sort();
        l
    }

    fn check_backend(&self, x: &Obj) -> Result<()> {
        if x.backend() != &self.backend {
            return Err(Error::BackendMismatch(
                self.backend.name().into(),
                x.backend().name().into(),
            ));
        }
        Ok(())
    }

    /// True iff every composition factor of `x` lies in C.
    pub fn member(&self, x: &Obj) -> Result<bool> {
        self.check_backend(x)?;
        if x.is_zero() {
            return Ok(true);
        }
        Ok(abcat::composition_factors(x)?
            .iter()
            .all(|s| self.simples.contains(s)))
    }

    /// `t_C(M)`: add images of maps from C-simples, pass to the quotient and
    /// repeat until the dimension stabilizes (at most `length(M)` rounds).
    pub fn torsion_part(&self, m: &Obj) -> Result<SubObj> {
        self.check_backend(m)?;
        let mut current = SubObj::zero(m);
        loop {
            let q = quotient_object(m, &current)?;
            let mut spanning: Vec<_> = (0..m.dims().len())
                .map(|v| current.basis(v).clone())
                .collect();
            let mut grew = false;
            for &s in &self.simples {
                for f in hom_basis(&self.backend.simple(s), &q.obj)? {
                    grew = true;
                    for (v, span) in spanning.iter_mut().enumerate() {
                        let lifted = q.section[v].mul(f.map(v))?;
                        *span = span.hstack(&lifted)?;
                    }
                }
            }
            if !grew {
                return Ok(current);
            }
            current = SubObj::from_spanning(m, spanning)?;
        }
    }

    /// `c_C(M)`: intersect kernels of all maps to C-simples, and repeat on the
    /// result until no such map is left.
    pub fn reject_part(&self, m: &Obj) -> Result<SubObj> {
        self.check_backend(m)?;
        let mut current = SubObj::whole(m);
        loop {
            let sub = current.obj().clone();
            let mut next = SubObj::whole(&sub);
            let mut shrank = false;
            for &s in &self.simples {
                for f in hom_basis(&sub, &self.backend.simple(s))? {
                    shrank = true;
                    next = next.intersect(&kernel(&f)?)?;
                }
            }
            if !shrank {
                return Ok(current);
            }
            // express `next` (inside `sub`) in the coordinates of `m`
            let spanning = (0..m.dims().len())
                .map(|v| current.basis(v).mul(next.basis(v)))
                .collect::<Result<Vec<_>, _>>()?;
            current = SubObj::from_spanning(m, spanning)?;
        }
    }

    /// Image of `t_C(M)` under `f: M -> N` lies inside `t_C(N)`.
    pub fn maps_torsion_into_torsion(&self, f: &Mor) -> Result<bool> {
        let tm = self.torsion_part(f.source())?;
        let tn = self.torsion_part(f.target())?;
        tm.push_forward(f)?.is_contained_in(&tn)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abcat::{direct_sum, spin_submodule};
    use crate::exactlin::Mat;
    use crate::field::Field;

    fn setup() -> (Backend, Obj) {
        let b = Backend::path_a2(Field::Prime(2));
        let m = Obj::new(&b, vec![1, 1], vec![Mat::identity(b.field(), 1)]).unwrap();
        (b, m)
    }

    #[test]
    fn membership() {
        let (b, m) = setup();
        let c = SerreSpec::from_labels(&b, &["S2"]).unwrap();
        assert!(c.member(&b.simple(1)).unwrap());
        assert!(!c.member(&m).unwrap());
        assert!(c.member(&Obj::zero(&b)).unwrap());
        assert!(SerreSpec::zero(&b).member(&Obj::zero(&b)).unwrap());
        let other = Backend::repz2();
        assert!(matches!(
            c.member(&other.simple(0)),
            Err(Error::BackendMismatch(..))
        ));
    }

    #[test]
    fn torsion_and_reject_of_m12() {
        let (b, m) = setup();
        let s2 = SerreSpec::from_labels(&b, &["S2"]).unwrap();
        let s1 = SerreSpec::from_labels(&b, &["S1"]).unwrap();
        assert_eq!(s2.torsion_part(&m).unwrap().obj().dims(), &[0, 1]);
        assert!(s1.torsion_part(&m).unwrap().is_zero());
        assert_eq!(s1.reject_part(&m).unwrap().obj().dims(), &[0, 1]);
        assert!(s2.reject_part(&m).unwrap().is_whole());
    }

    #[test]
    fn members_are_their_own_torsion_and_have_zero_reject() {
        let (b, _) = setup();
        let c = SerreSpec::from_labels(&b, &["S2"]).unwrap();
        let x = direct_sum(&b.simple(1), &b.simple(1)).unwrap();
        assert!(c.torsion_part(&x).unwrap().is_whole());
        assert!(c.reject_part(&x).unwrap().is_zero());
    }

    #[test]
    fn torsion_absorbs_extensions() {
        // M12 is an extension of S1 by S2; with C = everything it is all torsion
        let (b, m) = setup();
        let c = SerreSpec::full(&b);
        assert!(c.torsion_part(&m).unwrap().is_whole());
        let socle = spin_submodule(&m, &Mat::from_ints(b.field(), &[&[0], &[1]])).unwrap();
        assert!(socle.is_contained_in(&c.torsion_part(&m).unwrap()).unwrap());
    }
}
