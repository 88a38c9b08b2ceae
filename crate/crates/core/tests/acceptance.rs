//! Acceptance criteria 1-9. Each criterion prints one PASS/FAIL line; the
//! test fails at the end if any criterion failed.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use serreloc::abcat::{factor_counts, Backend};
use serreloc::field::Field;
use serreloc::ideal::{
    brute_force_tensor_ideals, build_quotient_backend, component_grid, enumerate_tensor_ideals, index_set,
    monoidal_obstruction, satisfies_vanishing, tensor_ideal_closure, unit_decomposition,
};
use serreloc::monoidal::{tensor_obj, unit};
use serreloc::quotient::{q_length, qhom_basis};
use serreloc::serre::SerreSpec;
use serreloc::spec::preset;
use serreloc::verify::oracle::{chain_length, colimit_dimension};
use serreloc::verify::sample::{self, Caps};
use serreloc::verify::{run_suite, Suite, SuiteReport};

const SEED: u64 = 20240917;

struct Outcome {
    ok: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { ok: true, notes: Vec::new() }
    }

    fn check(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.notes.push(what.into());
        }
    }

    fn within(&mut self, elapsed: Duration, limit: Duration) {
        self.check(elapsed < limit, format!("took {elapsed:?}, limit {limit:?}"));
    }

    fn suite(&mut self, r: &SuiteReport, what: &str) {
        if let Some(reason) = &r.skipped {
            self.check(false, format!("{what}: skipped ({reason})"));
        }
        for f in &r.failures {
            self.check(false, format!("{what}: trial {} {}", f.trial, f.message));
        }
    }
}

fn report(n: usize, title: &str, o: &Outcome, elapsed: Duration) -> bool {
    // straight to stdout so the lines survive libtest's output capture
    let mut out = std::io::stdout().lock();
    let status = if o.ok { "PASS" } else { "FAIL" };
    writeln!(out, "criterion {n} [{status}] {title} ({:.2}s)", elapsed.as_secs_f64()).unwrap();
    for note in o.notes.iter().take(10) {
        writeln!(out, "    {note}").unwrap();
    }
    out.flush().unwrap();
    o.ok
}

fn labels(c: &SerreSpec) -> Vec<String> {
    c.labels()
}

fn spec(b: &Backend, ls: &[&str]) -> SerreSpec {
    SerreSpec::from_labels(b, ls).unwrap()
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let b = Backend::repz2();
    let w1 = b.simple_index("W1").unwrap();
    let closure = tensor_ideal_closure(&b, &BTreeSet::from([w1])).unwrap();
    let mut got = labels(&closure);
    got.sort();
    o.check(got == ["W1", "W2"], format!("closure of {{W1}} is {got:?}"));
    let ideals = enumerate_tensor_ideals(&b).unwrap();
    let sets: Vec<usize> = ideals.iter().map(|d| d.serre.simples().len()).collect();
    o.check(sets == [0, 2], format!("ideal sizes {sets:?}, expected the two trivial ideals"));
    let w = monoidal_obstruction(&spec(&b, &["W1"])).unwrap();
    o.check(w == Some(w1), format!("obstruction witness {w:?}"));
    // the same through the command line
    let run = |args: &[&str]| {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = serreloc::cli::run(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap())
    };
    let (code, text) = run(&["serreloc", "closure", "repz2", "--simples", "W1"]);
    o.check(code == 0 && text.trim() == "{W1, W2}", format!("cli closure: {code} {text:?}"));
    let (code, text) = run(&["serreloc", "obstruction", "repz2", "--serre", "W1"]);
    o.check(code == 0 && text.trim() == "witness: W1", format!("cli obstruction: {code} {text:?}"));
    let (code, text) = run(&["serreloc", "classify-ideals", "repz2"]);
    o.check(code == 0 && text.starts_with("2 two-sided"), format!("cli classify-ideals: {code} {text:?}"));
    o.within(start.elapsed(), Duration::from_secs(1));
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let b = Backend::matvec(Field::Rational, vec![2, 1]).unwrap();
    let ideals = enumerate_tensor_ideals(&b).unwrap();
    o.check(ideals.len() == 4, format!("{} ideals", ideals.len()));
    let block1 = ideals
        .iter()
        .find(|d| {
            let mut l = d.serre.labels();
            l.sort();
            l == ["E1_11", "E1_12", "E1_21", "E1_22"]
        })
        .expect("block-1 ideal is enumerated");
    let q = build_quotient_backend(&b, block1).unwrap();
    let target = Backend::matvec(Field::Rational, vec![1]).unwrap();
    let model = &q.backend;
    o.check(model.simple_count() == target.simple_count(), "simple counts differ");
    // fusion: products of cell simples, computed in the model and in the target
    for s in 0..model.simple_count() {
        for t in 0..model.simple_count() {
            let a = factor_counts(&tensor_obj(&model.simple(s), &model.simple(t)).unwrap()).unwrap();
            let c = factor_counts(&tensor_obj(&target.simple(s), &target.simple(t)).unwrap()).unwrap();
            o.check(a == c, format!("fusion of simples {s},{t}: {a:?} vs {c:?}"));
        }
    }
    // and T respects the fusion of surviving source simples
    for s in 0..b.simple_count() {
        for t in 0..b.simple_count() {
            let prod = tensor_obj(&b.simple(s), &b.simple(t)).unwrap();
            let lhs = q.to_model(&prod).unwrap();
            let rhs = tensor_obj(&q.to_model(&b.simple(s)).unwrap(), &q.to_model(&b.simple(t)).unwrap()).unwrap();
            o.check(lhs == rhs, format!("T(S{s}⊗S{t}) != T(S{s})⊗T(S{t})"));
        }
    }
    let (um, ut) = (unit_decomposition(model).unwrap(), unit_decomposition(&target).unwrap());
    o.check(um.len() == ut.len(), "unit summand counts differ");
    let (gm, gt) = (component_grid(model).unwrap(), component_grid(&target).unwrap());
    o.check(gm == gt, "component grids differ");
    o.check(q.to_model(&unit(&b).unwrap()).unwrap() == unit(model).unwrap(), "T(1) is not the unit");
    o.within(start.elapsed(), Duration::from_secs(1));
    o
}

/// Path backends over GF(2) and GF(3) for the colimit oracle.
fn small_path_backends() -> Vec<Backend> {
    let mut out = Vec::new();
    for f in [Field::Prime(2), Field::Prime(3)] {
        out.push(Backend::path_a2(f));
        out.push(Backend::path_algebra(f, 3, vec![(0, 1), (1, 2)]).unwrap());
        out.push(Backend::path_algebra(f, 3, vec![(0, 1), (0, 2)]).unwrap());
    }
    out
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let b = Backend::path_a2(Field::Prime(2));
    let c = spec(&b, &["S2"]);
    let m12 = preset("pathA2", None).unwrap().object("M12").unwrap();
    let q = qhom_basis(&m12, &m12, &c).unwrap().len();
    let oracle = colimit_dimension(&m12, &m12, &c).unwrap();
    o.check(q == 1 && oracle.dimension == 1, format!("dim Hom(M12, M12) = {q}, oracle {}", oracle.dimension));
    let ql = q_length(&m12, &c).unwrap();
    let chain = chain_length(&m12, &c).unwrap();
    o.check(ql == 1 && chain == 1, format!("q_length(M12) = {ql}, oracle {chain}"));

    let backends = small_path_backends();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut exceptions = 0;
    for k in 0..100 {
        let b = &backends[k % backends.len()];
        let c = SerreSpec::new(b, (0..b.simple_count()).filter(|_| rng.gen_bool(0.5))).unwrap();
        let a = rng.gen_range(0..=6);
        let m = sample::object(b, Caps { total: a, cell: 1 }, &mut rng).unwrap();
        let n = sample::object(b, Caps { total: 6 - a, cell: 1 }, &mut rng).unwrap();
        let canonical = qhom_basis(&m, &n, &c).unwrap().len();
        match colimit_dimension(&m, &n, &c) {
            Ok(r) if r.dimension == canonical && r.directed => {}
            Ok(r) => {
                exceptions += 1;
                o.check(
                    false,
                    format!(
                        "triple {k} on {}: canonical {canonical}, colimit {} (directed {})",
                        b.name(),
                        r.dimension,
                        r.directed
                    ),
                );
            }
            Err(e) => {
                exceptions += 1;
                o.check(false, format!("triple {k}: oracle error {e}"));
            }
        }
    }
    o.check(exceptions == 0, format!("{exceptions} exceptions"));
    o.within(start.elapsed(), Duration::from_secs(60));
    o
}

/// `(B, C)` pairs for the general suites.
fn general_configs() -> Vec<SerreSpec> {
    let a2 = Backend::path_a2(Field::Prime(2));
    let a3 = Backend::path_algebra(Field::Prime(3), 3, vec![(0, 1), (1, 2)]).unwrap();
    let d3 = Backend::path_algebra(Field::Rational, 3, vec![(0, 1), (0, 2)]).unwrap();
    let z2 = Backend::repz2();
    let z3 = preset("repz3", None).unwrap().backend;
    let mv = Backend::matvec(Field::Prime(2), vec![2, 1]).unwrap();
    vec![
        spec(&a2, &["S2"]),
        spec(&a2, &["S1"]),
        spec(&a3, &["S2"]),
        spec(&d3, &["S1", "S3"]),
        spec(&z2, &["W1"]),
        spec(&z3, &["chi(1)"]),
        spec(&mv, &["E1_11", "E1_12", "E1_21", "E1_22"]),
        spec(&mv, &["E1_22"]),
    ]
}

/// `(B, C)` with C a two-sided tensor-ideal.
fn ideal_configs() -> Vec<SerreSpec> {
    let z2 = Backend::repz2();
    let z3 = preset("repz3", None).unwrap().backend;
    let k22 = Backend::group_algebra(Field::Prime(5), vec![2, 2], None).unwrap();
    let mv = Backend::matvec(Field::Prime(2), vec![2, 1]).unwrap();
    let mv3 = Backend::matvec(Field::Prime(3), vec![1, 2]).unwrap();
    let mut out = vec![
        SerreSpec::zero(&z2),
        SerreSpec::full(&z2),
        SerreSpec::zero(&z3),
        SerreSpec::zero(&k22),
    ];
    for b in [mv, mv3] {
        out.extend(enumerate_tensor_ideals(&b).unwrap().into_iter().map(|d| d.serre));
    }
    out
}

fn describe(c: &SerreSpec) -> String {
    format!("{} C={:?}", c.backend().name(), c.labels())
}

fn run_many(o: &mut Outcome, suites: &[Suite], configs: &[SerreSpec], trials: usize) -> usize {
    let mut nontrivial = 0;
    for c in configs {
        for &s in suites {
            let r = run_suite(s, c, trials, SEED).unwrap_or_else(|e| panic!("{s} on {}: {e}", describe(c)));
            o.suite(&r, &format!("{s} on {}", describe(c)));
            nontrivial += r.nontrivial;
        }
    }
    nontrivial
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let nt = run_many(&mut o, &[Suite::Lemma2_4], &general_configs(), 200);
    o.check(nt > 0, "no nontrivial trials");
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let nt = run_many(&mut o, &[Suite::Lemma4_1, Suite::Lemma4_2, Suite::Lemma4_3], &ideal_configs(), 200);
    // mono⊗mono and epi⊗epi also hold for non-ideal C
    let z2 = Backend::repz2();
    let mv = Backend::matvec(Field::Prime(2), vec![2, 1]).unwrap();
    run_many(
        &mut o,
        &[Suite::Lemma4_2, Suite::Lemma4_3],
        &[spec(&z2, &["W1"]), spec(&mv, &["E1_12"])],
        200,
    );
    o.check(nt > 0, "no nontrivial trials");
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    let configs: Vec<SerreSpec> = ideal_configs().into_iter().filter(|c| !c.is_zero()).collect();
    let nt = run_many(&mut o, &[Suite::Prop4_5], &configs, 200);
    o.check(nt > 0, "no trial used a nonzero alternative lift");
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let mut configs = general_configs();
    configs.extend(ideal_configs());
    run_many(&mut o, &[Suite::Prop3_2, Suite::Lemma3_3, Suite::FunctorialityT], &configs, 200);
    // simples and the canonical pair directly
    for c in &configs {
        let b = c.backend();
        for s in 0..b.simple_count() {
            let l = q_length(&b.simple(s), c).unwrap();
            o.check(l == usize::from(!c.contains_simple(s)), format!("q_length of {} is {l}", b.simple_label(s)));
        }
    }
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let configs = ideal_configs();
    let (groups, matvecs): (Vec<_>, Vec<_>) = configs.into_iter().partition(|c| c.backend().matvec_blocks().is_none());
    run_many(&mut o, &[Suite::Prop4_8, Suite::Prop4_9, Suite::Prop4_10], &matvecs, 100);
    run_many(&mut o, &[Suite::Prop4_8, Suite::Prop4_9, Suite::Prop4_10], &groups, 25);
    o
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new();
    let presets = [
        "repz2",
        "repz3",
        "matvec:1",
        "matvec:2,1",
        "matvec:1,1,1",
        "matvec:2,2",
        "matvec:3",
        "matvec:3,1,1",
        "matvec:2,1,1,1",
    ];
    let mut backends: Vec<Backend> = presets.iter().map(|p| preset(p, None).unwrap().backend).collect();
    backends.push(preset("group:2,2", Some(Field::Prime(3))).unwrap().backend);
    backends.push(preset("group:2,3", Some(Field::Prime(7))).unwrap().backend);
    backends.push(preset("group:4", Some(Field::Prime(5))).unwrap().backend);
    for b in &backends {
        assert!(b.simple_count() <= 12);
        let grid = component_grid(b).unwrap();
        let ideals = enumerate_tensor_ideals(b).unwrap();
        let mut listed: Vec<BTreeSet<usize>> = ideals.iter().map(|d| d.serre.simples().clone()).collect();
        listed.sort();
        let mut brute = brute_force_tensor_ideals(b).unwrap();
        brute.sort();
        o.check(listed == brute, format!("{}: enumeration {listed:?} vs brute force {brute:?}", b.name()));
        for d in &ideals {
            for row in &grid.cells {
                for cell in row {
                    let inside = cell.iter().filter(|s| d.serre.contains_simple(**s)).count();
                    o.check(
                        inside == 0 || inside == cell.len(),
                        format!("{}: ideal {:?} splits a cell", b.name(), d.j),
                    );
                }
            }
            let j: BTreeSet<usize> = d.j.iter().copied().collect();
            o.check(satisfies_vanishing(&grid, &j), format!("{}: J={:?} fails vanishing", b.name(), d.j));
            o.check(index_set(&d.serre, &grid) == j, format!("{}: J={:?} is not the index set", b.name(), d.j));
        }
        let r = run_suite(Suite::Prop4_11, &SerreSpec::zero(b), 50, SEED).unwrap();
        o.suite(&r, &format!("prop_4_11 on {}", b.name()));
    }
    o
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("tensor-ideals of Rep(Z2) over Q", criterion_1),
        ("ideals and quotient of matvec (2,1)", criterion_2),
        ("quotient Hom against the colimit oracle", criterion_3),
        ("zero/mono/epi classification suite", criterion_4),
        ("kernel/cokernel and mono/epi tensor suites", criterion_5),
        ("tensor of quotient morphisms is well defined", criterion_6),
        ("finite length and canonical-pair Hom", criterion_7),
        ("monoidal, multiring and rigidity suites on quotient models", criterion_8),
        ("ideal classification cross-check", criterion_9),
    ];
    let mut failed = Vec::new();
    for (k, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        if !report(k + 1, title, &o, start.elapsed()) {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
