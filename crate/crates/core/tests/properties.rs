//! Randomised invariants over the sampled objects of several backends.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use serreloc::abcat::{factor_counts, hom_basis, image, kernel, quotient_object, Backend};
use serreloc::field::Field;
use serreloc::monoidal::{tensor_obj, unit};
use serreloc::quotient::{canonical_map, q_compose, q_length, qhom_basis, QMor};
use serreloc::serre::SerreSpec;
use serreloc::verify::sample::{self, Caps};
use serreloc::verify::{run_suite_with, Execution, Suite};

const SMALL: Caps = Caps { total: 4, cell: 1 };

fn backends() -> Vec<Backend> {
    vec![
        Backend::path_a2(Field::Prime(2)),
        Backend::path_algebra(Field::Prime(3), 3, vec![(0, 1), (1, 2)]).unwrap(),
        Backend::path_algebra(Field::Rational, 3, vec![(0, 1), (0, 2)]).unwrap(),
        Backend::repz2(),
        Backend::group_algebra(Field::Prime(7), vec![3], None).unwrap(),
        Backend::matvec(Field::Prime(2), vec![2, 1]).unwrap(),
    ]
}

/// A backend and a Serre subcategory chosen from `mask`.
fn setup(which: usize, mask: u32) -> (Backend, SerreSpec) {
    let all = backends();
    let b = all[which % all.len()].clone();
    let c = SerreSpec::new(&b, (0..b.simple_count()).filter(|s| mask >> s & 1 == 1)).unwrap();
    (b, c)
}

fn q_equal(c: &SerreSpec, a: &QMor, b: &QMor) -> bool {
    let minus = c.backend().field().int(-1);
    a.add(&b.scale(&minus)).unwrap().is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn subobject_lattice_is_modular(which in 0usize..6, seed in any::<u64>()) {
        let (b, _) = setup(which, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = sample::object(&b, SMALL, &mut rng).unwrap();
        let s = sample::subobject(&m, &mut rng).unwrap();
        let t = sample::subobject(&m, &mut rng).unwrap();
        let (sum, meet) = (s.sum(&t).unwrap(), s.intersect(&t).unwrap());
        prop_assert!(meet.is_contained_in(&s).unwrap());
        prop_assert!(s.is_contained_in(&sum).unwrap());
        prop_assert!(t.is_contained_in(&sum).unwrap());
        prop_assert_eq!(sum.dim() + meet.dim(), s.dim() + t.dim());
        let q = quotient_object(&m, &s).unwrap();
        prop_assert_eq!(q.obj.dim() + s.dim(), m.dim());
        prop_assert!(q.proj.is_surjective());
        prop_assert!(kernel(&q.proj).unwrap().is_contained_in(&s).unwrap());
    }

    #[test]
    fn kernel_and_image_split_the_source(which in 0usize..6, seed in any::<u64>()) {
        let (b, _) = setup(which, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = sample::object(&b, SMALL, &mut rng).unwrap();
        let n = sample::object(&b, SMALL, &mut rng).unwrap();
        let f = sample::morphism(&m, &n, &mut rng).unwrap();
        prop_assert_eq!(kernel(&f).unwrap().dim() + image(&f).unwrap().dim(), m.dim());
        prop_assert_eq!(image(&f).unwrap().dim(), f.rank());
    }

    #[test]
    fn quotient_length_counts_surviving_factors(which in 0usize..6, mask in 0u32..32, seed in any::<u64>()) {
        let (b, c) = setup(which, mask);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample::object(&b, SMALL, &mut rng).unwrap();
        let counts = factor_counts(&x).unwrap();
        let length: usize = counts.values().sum();
        let ql = q_length(&x, &c).unwrap();
        prop_assert!(ql <= length);
        let outside: usize = counts
            .iter()
            .filter(|(l, _)| !c.contains_simple(b.simple_index(l).unwrap()))
            .map(|(_, k)| k)
            .sum();
        prop_assert_eq!(ql, outside);
        prop_assert_eq!(ql == 0, c.member(&x).unwrap());
    }

    #[test]
    fn torsion_part_lies_in_c_and_its_quotient_is_torsion_free(which in 0usize..6, mask in 0u32..32, seed in any::<u64>()) {
        let (b, c) = setup(which, mask);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = sample::object(&b, SMALL, &mut rng).unwrap();
        let t = c.torsion_part(&m).unwrap();
        prop_assert!(c.member(t.obj()).unwrap());
        let rest = quotient_object(&m, &t).unwrap().obj;
        prop_assert!(c.torsion_part(&rest).unwrap().is_zero());
    }

    #[test]
    fn zero_serre_hom_is_plain_hom(which in 0usize..6, seed in any::<u64>()) {
        let (b, _) = setup(which, 0);
        let c = SerreSpec::zero(&b);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = sample::object(&b, Caps { total: 3, cell: 1 }, &mut rng).unwrap();
        let n = sample::object(&b, Caps { total: 3, cell: 1 }, &mut rng).unwrap();
        prop_assert_eq!(qhom_basis(&m, &n, &c).unwrap().len(), hom_basis(&m, &n).unwrap().len());
    }

    #[test]
    fn canonical_functor_preserves_composition(which in 0usize..6, mask in 0u32..32, seed in any::<u64>()) {
        let (b, c) = setup(which, mask);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let caps = Caps { total: 3, cell: 1 };
        let x = sample::object(&b, caps, &mut rng).unwrap();
        let y = sample::object(&b, caps, &mut rng).unwrap();
        let z = sample::object(&b, caps, &mut rng).unwrap();
        let f = sample::morphism(&x, &y, &mut rng).unwrap();
        let g = sample::morphism(&y, &z, &mut rng).unwrap();
        let whole = canonical_map(&g.after(&f).unwrap(), &c).unwrap();
        let parts = q_compose(&canonical_map(&g, &c).unwrap(), &canonical_map(&f, &c).unwrap()).unwrap();
        prop_assert!(q_equal(&c, &whole, &parts));
        let id = canonical_map(&x.identity(), &c).unwrap();
        prop_assert!(q_equal(&c, &id, &QMor::identity(&c, &x).unwrap()));
        // with C zero the functor is faithful
        if c.is_zero() {
            prop_assert_eq!(canonical_map(&f, &c).unwrap().is_zero(), f.is_zero());
        }
    }

    #[test]
    fn tensor_unit_preserves_factors(which in 3usize..6, seed in any::<u64>()) {
        let (b, _) = setup(which, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample::object(&b, Caps { total: 3, cell: 1 }, &mut rng).unwrap();
        let one = unit(&b).unwrap();
        let fx = factor_counts(&x).unwrap();
        prop_assert_eq!(factor_counts(&tensor_obj(&one, &x).unwrap()).unwrap(), fx.clone());
        prop_assert_eq!(factor_counts(&tensor_obj(&x, &one).unwrap()).unwrap(), fx);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn suites_are_deterministic_and_execution_independent(which in 0usize..6, mask in 0u32..32, seed in any::<u64>()) {
        let (_, c) = setup(which, mask);
        for suite in [Suite::Lemma2_4, Suite::Prop3_2, Suite::ColimitOracle] {
            let run = |exec| match run_suite_with(suite, &c, 6, seed, exec) {
                Ok(r) => {
                    assert!(r.pass, "{suite} failed: {:?}", r.failures);
                    serde_json::to_string(&r).unwrap()
                }
                Err(e) => format!("error {e}"),
            };
            let a = run(Execution::Parallel);
            prop_assert_eq!(&a, &run(Execution::Sequential));
            prop_assert_eq!(&a, &run(Execution::Parallel));
        }
    }

    #[test]
    fn zero_trials_are_vacuous(which in 0usize..6, mask in 0u32..32, seed in any::<u64>()) {
        let (_, c) = setup(which, mask);
        for r in serreloc::verify::run_all(&c, 0, seed) {
            prop_assert!(r.pass);
            prop_assert_eq!(r.failures.len(), 0);
            if r.skipped.is_none() {
                prop_assert!(r.vacuous);
            }
        }
    }
}
