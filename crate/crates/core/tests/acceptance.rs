//! End-to-end acceptance checks, one line per criterion.
//!
//! Runs as a plain binary so the report prints under `cargo test`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zol_core::akrule::{ak_query_count, enumerate_halvings_with, is_valid_halving, Generators};
use zol_core::circuits::{
    alice_input, build_unitary, grover_iterations, grover_success_probability, hadamard_all, phase_oracle,
    run_extended, sharp_input, simon_postprocess, AlgorithmKind, Selection, SimonSolution, ARGUMENT, SETTING,
};
use zol_core::gf2::BitMatrix;
use zol_core::problems::{deutsch_jozsa, grover, periodic, simon, OracleProblem};
use zol_core::qcomplexity::{cqc, witness_tree, CandidateSet};
use zol_core::statevec::State;
use zol_core::timesym::{enumerate_instances, reconstruct_check, zigzag_instance, Halving};
use zol_core::{Bits, Complex64, TOLERANCE};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn b(s: &str) -> Bits {
    Bits::parse(s).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn sorted_names(p: &OracleProblem, s: &CandidateSet) -> Vec<String> {
    let mut v: Vec<String> = s.settings(p).map(|x| x.to_string()).collect();
    v.sort();
    v
}

fn grover_exactness() -> Check {
    let g = grover(2).map_err(err)?;
    let circuit = build_unitary(&g, AlgorithmKind::Grover).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for s in g.settings() {
        let t = run_extended(&g, &circuit, Selection::Setting(s), &mut rng).map_err(err)?;
        let p = t.final_distribution.iter().find(|(v, _)| *v == s).map_or(0.0, |x| x.1);
        ensure(t.outcome == s && (p - 1.0).abs() < TOLERANCE, || {
            format!("b={s}: outcome {} with p={p}", t.outcome)
        })?;
    }
    let layout = circuit.layout();
    let marked = sharp_input(&g, layout, &b("01"))
        .and_then(|s| s.apply(&hadamard_all(layout, ARGUMENT)?))
        .and_then(|s| s.apply(&phase_oracle(&g, layout)?))
        .map_err(err)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    for (a, sign) in [1.0, -1.0, 1.0, 1.0].iter().enumerate() {
        amps[0b0100 | a] = Complex64::new(sign / 2.0, 0.0);
    }
    let expect = State::from_amplitudes(layout.clone(), amps).map_err(err)?;
    let d = marked.distance_up_to_phase(&expect).map_err(err)?;
    ensure(d < TOLERANCE, || format!("post-oracle state off by {d:e}"))?;
    Ok("all four settings read with p=1; post-oracle signs (+,-,+,+)".into())
}

fn zigzag_exactness() -> Check {
    let g = grover(2).map_err(err)?;
    let c = build_unitary(&g, AlgorithmKind::Grover).map_err(err)?;
    let left = BitMatrix::from_strs(2, &["10"]).map_err(err)?;
    let right = BitMatrix::from_strs(2, &["01"]).map_err(err)?;
    let h = Halving::new(&g, &c, &b("01"), left, right).map_err(err)?;
    let inst = zigzag_instance(&g, &c, &h, &b("01")).map_err(err)?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let ket = |pairs: &[(&str, &str)]| {
        let mut s = State::zero(c.layout().clone());
        for (bb, aa) in pairs {
            let basis = State::basis(c.layout().clone(), &[b(bb), b(aa)]).unwrap();
            s = s.add(&basis.scale(r)).unwrap();
        }
        s
    };
    let din = inst
        .input_state
        .distance_up_to_phase(&ket(&[("01", "00"), ("11", "00")]))
        .map_err(err)?;
    let dout = inst
        .output_state
        .distance_up_to_phase(&ket(&[("01", "01"), ("11", "11")]))
        .map_err(err)?;
    ensure(din < TOLERANCE && dout < TOLERANCE, || {
        format!("input off by {din:e}, output off by {dout:e}")
    })?;
    Ok(format!("input/output residuals {din:.1e} / {dout:.1e}"))
}

fn instance_count() -> Check {
    let g = grover(2).map_err(err)?;
    let c = build_unitary(&g, AlgorithmKind::Grover).map_err(err)?;
    let all = enumerate_instances(&g, &c, &b("01")).map_err(err)?;
    let got: BTreeSet<Vec<String>> = all.iter().map(|i| sorted_names(&g, &i.sigma_prime)).collect();
    let want: BTreeSet<Vec<String>> = [["01", "11"], ["00", "01"], ["01", "10"]]
        .iter()
        .map(|p| p.iter().map(|x| x.to_string()).collect())
        .collect();
    ensure(all.len() == 3 && got == want, || {
        format!("got {} instances: {got:?}", all.len())
    })?;
    Ok("3 instances: {00,01}, {01,10}, {01,11}".into())
}

fn reconstruction() -> Check {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for (p, kind) in [
        (grover(2).map_err(err)?, AlgorithmKind::Grover),
        (deutsch_jozsa(2).map_err(err)?, AlgorithmKind::DeutschJozsa),
    ] {
        let c = build_unitary(&p, kind).map_err(err)?;
        let mut finals = Vec::new();
        for s in p.settings() {
            for inst in enumerate_instances(&p, &c, &s).map_err(err)? {
                for h in inst.halvings {
                    if !finals.contains(&h.final_measurement) {
                        finals.push(h.final_measurement);
                    }
                }
            }
        }
        ensure(!finals.is_empty(), || {
            format!("{} has no valid final measurement", p.name())
        })?;
        for f in &finals {
            let r = reconstruct_check(&p, &c, f).map_err(err)?;
            worst = worst.max(r);
            checked += 1;
            ensure(r < TOLERANCE, || {
                format!("{} {}: residual {r:e}", p.name(), f.description())
            })?;
        }
    }
    Ok(format!("{checked} final measurements, worst residual {worst:.1e}"))
}

fn reduced_density() -> Check {
    let cases: Vec<(OracleProblem, AlgorithmKind)> = vec![
        (grover(1).map_err(err)?, AlgorithmKind::Grover),
        (grover(2).map_err(err)?, AlgorithmKind::Grover),
        (grover(3).map_err(err)?, AlgorithmKind::Grover),
        (deutsch_jozsa(1).map_err(err)?, AlgorithmKind::DeutschJozsa),
        (deutsch_jozsa(2).map_err(err)?, AlgorithmKind::DeutschJozsa),
        (deutsch_jozsa(3).map_err(err)?, AlgorithmKind::DeutschJozsa),
        (simon(2).map_err(err)?, AlgorithmKind::Simon),
        (simon(3).map_err(err)?, AlgorithmKind::Simon),
        (periodic(3).map_err(err)?, AlgorithmKind::Simon),
    ];
    let mut worst: f64 = 0.0;
    let mut inputs = 0;
    let mut coherent: Vec<String> = Vec::new();
    for (p, kind) in &cases {
        let c = build_unitary(p, *kind).map_err(err)?;
        for s in p.settings() {
            let input = sharp_input(p, c.layout(), &s).map_err(err)?;
            let output = input.apply(&c.unitary).map_err(err)?;
            let d = input.reduced_density_distance(&output, SETTING).map_err(err)?;
            worst = worst.max(d);
            inputs += 1;
            ensure(d < TOLERANCE, || format!("{} b={s}: distance {d:e}", p.name()))?;
        }
        let input = alice_input(p, c.layout()).map_err(err)?;
        let output = input.apply(&c.unitary).map_err(err)?;
        let before = input.distribution(SETTING).map_err(err)?;
        let after = output.distribution(SETTING).map_err(err)?;
        let same = before.len() == after.len()
            && before
                .iter()
                .zip(&after)
                .all(|(x, y)| x.0 == y.0 && (x.1 - y.1).abs() < TOLERANCE);
        ensure(same, || format!("{}: B populations changed", p.name()))?;
        if p.len() <= 16 {
            let d = input.reduced_density_distance(&output, SETTING).map_err(err)?;
            coherent.push(format!("{}={d:.3}", p.name()));
        }
    }
    Ok(format!(
        "{inputs} sharp inputs, worst {worst:.1e}; B populations of the coherent input preserved; coherent-input distances (not expected to vanish) {}",
        coherent.join(" ")
    ))
}

fn ak_predictions() -> Check {
    let cases = [
        (grover(2).map_err(err)?, 1, Some(3)),
        (grover(4).map_err(err)?, 3, Some(15)),
        (deutsch_jozsa(1).map_err(err)?, 1, None),
        (deutsch_jozsa(2).map_err(err)?, 1, Some(3)),
        (deutsch_jozsa(3).map_err(err)?, 1, None),
        (simon(2).map_err(err)?, 1, Some(3)),
        (periodic(3).map_err(err)?, 1, None),
    ];
    let mut parts = Vec::new();
    for (p, predicted, baseline) in cases {
        let r = ak_query_count(&p).map_err(err)?;
        ensure(r.predicted_quantum_queries == Some(predicted), || {
            format!(
                "{}: predicted {:?}, want {predicted}",
                p.name(),
                r.predicted_quantum_queries
            )
        })?;
        if let Some(want) = baseline {
            ensure(r.classical_baseline == Some(want), || {
                format!("{}: baseline {:?}, want {want}", p.name(), r.classical_baseline)
            })?;
        }
        let base = r.classical_baseline.map_or("-".to_string(), |x| x.to_string());
        parts.push(format!("{} {predicted}/{base}", p.name()));
    }
    Ok(format!("predicted/baseline: {}", parts.join(", ")))
}

fn grover_scaling() -> Check {
    let mut total = 0;
    for n in [2usize, 4, 6] {
        let g = grover(n).map_err(err)?;
        let half = 1usize << (n / 2);
        for s in g.settings() {
            let hs = enumerate_halvings_with(&g, &s, Generators::Coordinates).map_err(err)?;
            ensure(!hs.is_empty(), || format!("grover-{n} b={s}: no coordinate halving"))?;
            for h in hs {
                for sigma in [&h.sigma_first, &h.sigma_second] {
                    let c = cqc(&g, sigma).map_err(err)?;
                    ensure(sigma.len() == half && c as usize == half - 1, || {
                        format!("grover-{n} b={s}: |σ′|={} cqc={c}", sigma.len())
                    })?;
                }
                total += 1;
            }
        }
    }
    Ok(format!("{total} coordinate halvings over n=2,4,6"))
}

fn circuit_properties() -> Check {
    for n in 1..=3 {
        let dj = deutsch_jozsa(n).map_err(err)?;
        let c = build_unitary(&dj, AlgorithmKind::DeutschJozsa).map_err(err)?;
        for e in dj.entries() {
            let out = sharp_input(&dj, c.layout(), &e.setting)
                .and_then(|s| s.apply(&c.unitary))
                .map_err(err)?;
            let p0 = out
                .distribution(ARGUMENT)
                .map_err(err)?
                .iter()
                .find(|(a, _)| a.value() == 0)
                .map_or(0.0, |x| x.1);
            let want = if e.solution.value() == 0 { 1.0 } else { 0.0 };
            ensure((p0 - want).abs() < TOLERANCE, || {
                format!("dj-{n} b={}: P(0^n)={p0}", e.setting)
            })?;
        }
    }

    let sp = simon(2).map_err(err)?;
    let c = build_unitary(&sp, AlgorithmKind::Simon).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut by_setting: std::collections::BTreeMap<Bits, Vec<Bits>> = Default::default();
    let runs = 120;
    for i in 0..runs {
        let selection = if i % 2 == 0 {
            Selection::Setting(b("0011"))
        } else {
            Selection::Random
        };
        let t = run_extended(&sp, &c, selection, &mut rng).map_err(err)?;
        let period = sp.solution(&t.setting).map_err(err)?;
        ensure(!t.outcome.dot(&period), || {
            format!("run {i}: a={} not orthogonal to p={period}", t.outcome)
        })?;
        by_setting.entry(t.setting).or_default().push(t.outcome);
    }
    for (setting, samples) in &by_setting {
        let found = simon_postprocess(samples, 2).map_err(err)?;
        let period = sp.solution(setting).map_err(err)?;
        ensure(found == SimonSolution::Found(period), || {
            format!("b={setting}: recovered {found:?}")
        })?;
    }

    let g = grover(4).map_err(err)?;
    let c = build_unitary(&g, AlgorithmKind::Grover).map_err(err)?;
    let k = grover_iterations(4);
    let want = grover_success_probability(4, k);
    let analytic = (((2 * k + 1) as f64) * (0.25f64).asin()).sin().powi(2);
    ensure((want - analytic).abs() < 1e-12, || "success formula disagrees".into())?;
    for s in g.settings() {
        let out = sharp_input(&g, c.layout(), &s)
            .and_then(|x| x.apply(&c.unitary))
            .map_err(err)?;
        let p = out
            .distribution(ARGUMENT)
            .map_err(err)?
            .iter()
            .find(|(a, _)| *a == s)
            .map_or(0.0, |x| x.1);
        ensure((p - analytic).abs() < 1e-6, || {
            format!("grover-4 b={s}: p={p}, want {analytic}")
        })?;
    }
    Ok(format!(
        "dj n<=3 deterministic; {runs} simon runs orthogonal, periods recovered for {} settings; grover-4 p={analytic:.6}",
        by_setting.len()
    ))
}

fn validity_filter() -> Check {
    let dj = deutsch_jozsa(2).map_err(err)?;
    let s = b("0011");
    let mut passed = Vec::new();
    for first in [[0usize, 1], [0, 2], [0, 3]] {
        let second: Vec<usize> = (0..4).filter(|r| !first.contains(r)).collect();
        let homogeneous = [&first[..], &second[..]]
            .iter()
            .all(|rows| rows.iter().all(|&r| s.bit(r) == s.bit(rows[0])));
        let v = is_valid_halving(
            &dj,
            &s,
            &BitMatrix::coordinates(4, &first),
            &BitMatrix::coordinates(4, &second),
        )
        .map_err(err)?;
        ensure(v.is_valid() == homogeneous, || {
            format!("rows {first:?}: valid={} homogeneous={homogeneous}", v.is_valid())
        })?;
        if v.is_valid() {
            passed.push(format!("{first:?}|{second:?}"));
        }
        if first == [0, 2] {
            ensure(!v.solution_blind, || "mixed split did not fail solution-blind".into())?;
        }
    }
    Ok(format!(
        "only {} passes; rows {{00,10}}|{{01,11}} fails solution-blind",
        passed.join(" ")
    ))
}

/// Plain minimax over every informative query, without memo or pruning.
fn naive_cqc(p: &OracleProblem, members: &[usize]) -> u32 {
    let sols: BTreeSet<Bits> = members.iter().map(|&i| p.entries()[i].solution).collect();
    if sols.len() <= 1 {
        return 0;
    }
    let mut best = u32::MAX;
    for a in 0..1u64 << p.arg_bits() {
        let mut groups: std::collections::BTreeMap<u64, Vec<usize>> = Default::default();
        for &i in members {
            groups.entry(p.value(i, a)).or_default().push(i);
        }
        if groups.len() < 2 {
            continue;
        }
        let worst = groups.values().map(|g| 1 + naive_cqc(p, g)).max().unwrap();
        best = best.min(worst);
    }
    best
}

fn subsets_up_to(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if !current.is_empty() {
        out.push(current.clone());
    }
    if current.len() == k {
        return;
    }
    for i in start..n {
        current.push(i);
        subsets_up_to(n, k, i + 1, current, out);
        current.pop();
    }
}

fn oracle_cross_checks() -> Check {
    let mut problems: Vec<OracleProblem> = Vec::new();
    for n in 1..=10 {
        problems.push(grover(n).map_err(err)?);
    }
    for n in 1..=4 {
        problems.push(deutsch_jozsa(n).map_err(err)?);
    }
    problems.push(simon(2).map_err(err)?);
    problems.push(simon(3).map_err(err)?);
    problems.push(periodic(3).map_err(err)?);

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut exhaustive, mut sampled) = (0usize, 0usize);
    for p in &problems {
        let sets: Vec<Vec<usize>> = if p.len() <= 16 {
            let mut out = Vec::new();
            subsets_up_to(p.len(), 6, 0, &mut Vec::new(), &mut out);
            exhaustive += out.len();
            out
        } else {
            let samples = if p.arg_bits() >= 4 { 60 } else { 300 };
            sampled += samples;
            (0..samples)
                .map(|_| {
                    let size = 1 + (rng.next_u32() % 6) as usize;
                    let mut m = BTreeSet::new();
                    while m.len() < size {
                        m.insert((rng.next_u64() % p.len() as u64) as usize);
                    }
                    m.into_iter().collect()
                })
                .collect()
        };
        for members in sets {
            let set = CandidateSet::new(p, members.clone()).map_err(err)?;
            let fast = cqc(p, &set).map_err(err)?;
            let slow = naive_cqc(p, &members);
            ensure(fast == slow, || {
                format!("{} {members:?}: memoized {fast}, naive {slow}", p.name())
            })?;
            let tree = witness_tree(p, &set).map_err(err)?;
            ensure(tree.depth() as u32 == fast, || {
                format!("{} {members:?}: tree depth {}", p.name(), tree.depth())
            })?;
            for s in set.settings(p) {
                let got = tree.replay(p, &s).map_err(err)?;
                ensure(got == Some(p.solution(&s).map_err(err)?), || {
                    format!("{} b={s}: replay gave {got:?}", p.name())
                })?;
            }
        }
    }
    Ok(format!(
        "{exhaustive} sets exhaustively, {sampled} sampled from larger problems"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Grover n=2 exactness", grover_exactness),
        ("zigzag instance exactness", zigzag_exactness),
        ("instance count", instance_count),
        ("reconstruction", reconstruction),
        ("reduced-density invariance", reduced_density),
        ("AK predictions and baselines", ak_predictions),
        ("Grover scaling", grover_scaling),
        ("circuit-level properties", circuit_properties),
        ("validity-filter fidelity", validity_filter),
        ("oracle cross-checks", oracle_cross_checks),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match check() {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {name}: {detail} ({:.2}s)",
                i + 1,
                t.elapsed().as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
