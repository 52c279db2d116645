//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use netlimit::axioms::{
    check_constants, check_inequality, check_inequality_theorem, check_mb, check_sandwich, check_uniqueness,
    run_all, stubs, AxiomReport, EnvelopeOperator, FunctionCorpus, LimitOperator, MonotoneFirstOperator,
};
use netlimit::expr::{evaluate, parse, Ast, BinaryOp, Builtin};
use netlimit::{
    envelopes, epsilon_delta_certificate, estimate_limit, limit_of_product, limit_of_quotient, limit_of_sum,
    mb_limit, Direction, EnvelopeTrace, EstimateConfig, LimitError, LimitVerdict, Net,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn dir(s: &str) -> Direction {
    s.parse().expect("valid direction")
}

fn net(src: &str) -> Net {
    parse(src).expect("valid expression").to_net()
}

fn six_dirs() -> Vec<Direction> {
    ["left:0", "right:0", "both:0", "inf", "-inf", "seq"].iter().map(|s| dir(s)).collect()
}

fn netlimit(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_netlimit"))
        .args(args)
        .env_remove("NETLIMIT_SEED")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 output"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// (expression, direction, analytic limit)
const CORPUS: [(&str, &str, f64); 20] = [
    ("3*x+1", "left:2", 7.0),
    ("2-x", "right:1", 1.0),
    ("x^2", "both:3", 9.0),
    ("x^3-2*x", "left:-1", 1.0),
    ("5*x^2-3*x+2", "right:0.5", 1.75),
    ("(x^2-1)/(x-1)", "left:1", 2.0),
    ("(x^2-4)/(x-2)", "both:2", 4.0),
    ("(x^3-8)/(x-2)", "right:2", 12.0),
    ("(x^2+x)/x", "both:0", 1.0),
    ("(x^2-9)/(x+3)", "left:-3", -6.0),
    ("1/x", "inf", 0.0),
    ("1-1/x", "inf", 1.0),
    ("(2*x+1)/(x+3)", "inf", 2.0),
    ("x/(1+abs(x))", "-inf", -1.0),
    ("exp(x)", "-inf", 0.0),
    ("1/n", "seq", 0.0),
    ("(n+1)/n", "seq", 1.0),
    ("1-2^(-n)", "seq", 1.0),
    ("sqrt(x)", "right:0", 0.0),
    ("x/(1+x)", "right:0", 0.0),
];

fn criterion_1(traces: &mut Vec<EnvelopeTrace>) -> Outcome {
    let start = Instant::now();
    let cfg = EstimateConfig::default();
    for (src, d, expected) in CORPUS {
        let (f, d) = (net(src), dir(d));
        let (verdict, trace) = estimate_limit(&f, &d, &cfg).map_err(|e| format!("{src} at {d}: {e}"))?;
        let l = verdict.limit().ok_or_else(|| format!("{src} at {d}: {verdict}"))?;
        ensure((l - expected).abs() <= 1e-6, || format!("{src} at {d}: {l} vs {expected}"))?;
        epsilon_delta_certificate(&f, &d, expected, &[1e-1, 1e-2, 1e-3], &cfg)
            .map_err(|e| format!("{src} at {d}: {e}"))?;
        traces.push(trace);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("20/20 converge within 1e-6 and certify eps 1e-1..1e-3 ({elapsed:.2?})"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let dirs = six_dirs();
    let reports: Vec<AxiomReport> = std::thread::scope(|s| {
        let handles: Vec<_> = (1..=10u64)
            .map(|seed| {
                let dirs = &dirs;
                s.spawn(move || {
                    let env = EnvelopeOperator::default();
                    let mono = MonotoneFirstOperator::default();
                    let ops: [&dyn LimitOperator; 2] = [&env, &mono];
                    run_all(&ops, dirs, seed)
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("axiom thread")).collect()
    });
    let elapsed = start.elapsed();
    let failing: Vec<String> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{} {} {} seed {}: {:?}", r.axiom.title(), r.operator, r.direction, r.seed, r.violations))
        .collect();
    ensure(failing.is_empty(), || failing.join("; "))?;
    let cases: usize = reports.iter().map(|r| r.cases).sum();
    ensure(reports.iter().all(|r| r.cases > 0), || "a check tested no cases".into())?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} reports, {cases} cases, zero violations over seeds 1-10 x 6 directions ({elapsed:.2?})",
        reports.len()
    ))
}

fn criterion_3() -> Outcome {
    let reference = EnvelopeOperator::default;
    let shifted = stubs::ShiftedOperator { inner: reference(), shift: 1.0 };
    let mirrored = stubs::MirroredOperator { inner: reference() };
    let blind = stubs::BlindOperator { inner: reference(), needle: "squeezed" };
    let env = reference();
    let mut lines = Vec::new();
    for d in six_dirs() {
        let caught = [
            ("constants", check_constants(&shifted, &d, 1)),
            ("inequality", check_inequality(&mirrored, &d, 1)),
            ("inequality theorem", check_inequality_theorem(&mirrored, &d, 1)),
            ("monotone bounded", check_mb(&stubs::InconclusiveOperator, &d, 1)),
            ("sandwich", check_sandwich(&blind, &d, 1)),
            ("uniqueness", check_uniqueness(&env, &shifted, &d, 1)),
        ];
        for (name, r) in caught {
            ensure(!r.violations.is_empty(), || format!("{name} stub not caught at {d}"))?;
            lines.push(r.violations.len());
        }
    }
    Ok(format!(
        "6 stubs caught on all 6 directions (min {} violations per check)",
        lines.iter().min().unwrap()
    ))
}

fn check_trace(trace: &EnvelopeTrace) -> Result<(), String> {
    for (k, s) in trace.steps.iter().enumerate() {
        if s.value.is_finite() && !(s.lower <= s.value && s.value <= s.upper) {
            return Err(format!("step {k}: f={} outside [{}, {}]", s.value, s.lower, s.upper));
        }
        if s.lower > s.upper {
            return Err(format!("step {k}: m > M"));
        }
        if let Some(n) = trace.steps.get(k + 1) {
            if n.lower < s.lower || n.upper > s.upper {
                return Err(format!("step {k}: envelopes not monotone"));
            }
        }
    }
    Ok(())
}

fn criterion_4(traces: &[EnvelopeTrace]) -> Outcome {
    let cfg = EstimateConfig::default();
    let mut checked = 0;
    for t in traces {
        check_trace(t)?;
        checked += 1;
    }
    for seed in 1..=10 {
        let corpus = FunctionCorpus::new(seed);
        let mut items = corpus.convergent(10);
        items.extend(corpus.monotone(10));
        items.extend(corpus.oscillators(3));
        for d in six_dirs() {
            for item in &items {
                let trace = envelopes(&item.net(&d), &d, &cfg).map_err(|e| e.to_string())?;
                check_trace(&trace).map_err(|e| format!("{} at {d}: {e}", item.label))?;
                checked += 1;
            }
        }
    }
    Ok(format!("m_k <= f(x_k) <= M_k and monotone envelopes on {checked} traces"))
}

fn criterion_5() -> Outcome {
    let (v, _) = estimate_limit(&net("sin(1/x)"), &dir("right:0"), &EstimateConfig::default())
        .map_err(|e| e.to_string())?;
    match v {
        LimitVerdict::Oscillates { liminf, limsup } if (liminf + 1.0).abs() <= 1e-3 && (limsup - 1.0).abs() <= 1e-3 => {
            Ok(format!("liminf={liminf:.6} limsup={limsup:.6}"))
        }
        other => Err(other.to_string()),
    }
}

fn criterion_6() -> Outcome {
    let cfg = EstimateConfig::default();
    let d = dir("left:1");
    let (up, _) = estimate_limit(&net("1/(1-x)"), &d, &cfg).map_err(|e| e.to_string())?;
    let (down, _) = estimate_limit(&net("-1/(1-x)"), &d, &cfg).map_err(|e| e.to_string())?;
    ensure(up == LimitVerdict::DivergesToPlusInfinity, || format!("1/(1-x): {up}"))?;
    ensure(down == LimitVerdict::DivergesToMinusInfinity, || format!("-1/(1-x): {down}"))?;
    Ok("1/(1-x) -> +inf, -1/(1-x) -> -inf at left:1".into())
}

fn criterion_7() -> Outcome {
    let cfg = EstimateConfig::default();
    let dirs = six_dirs();
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    for (i, (f, g)) in FunctionCorpus::new(2024).pairs(10).into_iter().enumerate() {
        let d = &dirs[i % dirs.len()];
        let (fnet, gnet) = (f.net(d), g.net(d));
        let lg = estimate_limit(&gnet, d, &cfg).map_err(|e| e.to_string())?.0.limit();
        let mut cases = vec![
            ("sum", limit_of_sum(&fnet, &gnet, d, &cfg), fnet.add(&gnet)),
            ("product", limit_of_product(&fnet, &gnet, d, &cfg), fnet.mul(&gnet)),
        ];
        let quotient = limit_of_quotient(&fnet, &gnet, d, &cfg);
        match lg {
            Some(l) if l.abs() > cfg.tolerance => cases.push(("quotient", quotient, fnet.div(&gnet))),
            _ => ensure(matches!(quotient, Err(LimitError::ZeroDenominatorLimit { .. })), || {
                format!("{} / {}: expected zero-denominator error", f.label, g.label)
            })?,
        }
        for (name, algebra, composed) in cases {
            let a = algebra.map_err(|e| format!("{name} of {} and {}: {e}", f.label, g.label))?;
            let (c, _) = estimate_limit(&composed, d, &cfg).map_err(|e| e.to_string())?;
            let (Some(a), Some(c)) = (a.limit(), c.limit()) else {
                return Err(format!("{name} of {} and {} at {d}: {a} vs {c}", f.label, g.label));
            };
            let diff = (a - c).abs();
            ensure(diff <= 4e-9, || format!("{name} of {} and {} at {d}: {a} vs {c}", f.label, g.label))?;
            worst = worst.max(diff);
            compared += 1;
        }
    }
    let zero = limit_of_quotient(&net("x+1"), &net("x"), &dir("left:0"), &cfg);
    ensure(matches!(zero, Err(LimitError::ZeroDenominatorLimit { .. })), || format!("(x+1)/x: {zero:?}"))?;
    Ok(format!("{compared} algebra limits agree (max diff {worst:.1e}); (x+1)/x raises ZeroDenominatorLimit"))
}

fn riemann_value(args: &[&str]) -> Result<f64, String> {
    let (code, out) = netlimit(args);
    ensure(code == 0, || format!("riemann {args:?} exited {code}"))?;
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    v["value"].as_f64().ok_or_else(|| format!("no value in {out}"))
}

fn criterion_8() -> Outcome {
    let linear = riemann_value(&["riemann", "x", "0", "1", "--json"])?;
    let square = riemann_value(&["riemann", "x^2", "0", "1", "--json"])?;
    let constant = riemann_value(&["riemann", "1", "2", "5", "--json"])?;
    ensure((linear - 0.5).abs() <= 1e-4, || format!("x: {linear}"))?;
    ensure((square - 1.0 / 3.0).abs() <= 1e-4, || format!("x^2: {square}"))?;
    ensure((constant - 3.0).abs() <= 1e-12 * 3.0, || format!("1 on [2,5]: {constant}"))?;
    Ok(format!("x -> {linear}, x^2 -> {square:.9}, 1 on [2,5] -> {constant}"))
}

fn criterion_9() -> Outcome {
    let cfg = EstimateConfig {
        max_steps: 21,
        ..EstimateConfig::default()
    };
    let v = mb_limit(&net("(1+1/n)^n"), &dir("seq"), &cfg).map_err(|e| e.to_string())?;
    let l = v.limit().ok_or_else(|| v.to_string())?;
    ensure((l - std::f64::consts::E).abs() <= 1e-3, || format!("{l}"))?;
    Ok(format!("(1+1/n)^n -> {l:.9} (n up to 2^20)"))
}

fn random_ast(rng: &mut ChaCha8Rng, depth: u32) -> Ast {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.5) {
            Ast::Var
        } else {
            Ast::Number(rng.gen_range(0..64) as f64 / 8.0)
        };
    }
    match rng.gen_range(0..7) {
        0 => Ast::neg(random_ast(rng, depth - 1)),
        1 => Ast::call(
            Builtin::ALL[rng.gen_range(0..Builtin::ALL.len())],
            random_ast(rng, depth - 1),
        ),
        k => {
            let op = [BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div, BinaryOp::Pow][k - 2];
            Ast::binary(op, random_ast(rng, depth - 1), random_ast(rng, depth - 1))
        }
    }
}

fn same(a: f64, b: f64) -> bool {
    a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan())
}

fn criterion_10() -> Outcome {
    for (src, want) in [("2+3*4", 14.0), ("2^3^2", 512.0), ("-2^2", -4.0), ("(2+3)*4", 20.0), ("8/4/2", 1.0)] {
        let got = evaluate(&parse(src).map_err(|e| e.to_string())?, 0.0);
        ensure(got == want, || format!("{src} = {got}, expected {want}"))?;
    }
    for (src, offset) in [("1/(x", 4), ("2+*3", 2), ("", 0), ("3 4", 2), ("sin(x", 5), ("foo(x)", 0)] {
        match parse(src) {
            Err(e) if e.offset == offset => {}
            other => return Err(format!("{src:?}: {other:?}, expected offset {offset}")),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..50 {
        let ast = random_ast(&mut rng, 4);
        let printed = ast.to_string();
        let back = parse(&printed).map_err(|e| format!("{printed}: {e}"))?;
        ensure(back == ast, || format!("{printed} reparsed differently"))?;
        for x in [-1.5, 0.25, 2.0] {
            ensure(same(evaluate(&ast, x), evaluate(&back, x)), || format!("{printed} at {x}"))?;
        }
    }
    Ok("precedence exact, 6 malformed inputs at correct offsets, 50 roundtrips".into())
}

fn criterion_11() -> Outcome {
    let runs: [&[&str]; 4] = [
        &["axioms", "--seed", "7", "--dirs", "left:0,inf,seq", "--json"],
        &["limit", "(x^2-1)/(x-1)", "--dir", "both:1", "--json"],
        &["certify", "2*x+1", "--dir", "left:1", "--value", "3", "--eps", "0.1,0.01", "--json"],
        &["riemann", "x^2", "0", "1", "--json"],
    ];
    for args in runs {
        let (c1, a) = netlimit(args);
        let (c2, b) = netlimit(args);
        ensure(c1 == c2 && a == b, || format!("{args:?} differs between runs"))?;
        ensure(!a.is_empty(), || format!("{args:?} printed nothing"))?;
    }
    Ok("axioms/limit/certify/riemann JSON byte-identical across two runs".into())
}

fn main() {
    let mut traces = Vec::new();
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "epsilon-delta equivalence", criterion_1(&mut traces)),
        (2, "axiom suite green", criterion_2()),
        (3, "harness self-test", criterion_3()),
        (4, "envelope invariants", criterion_4(&traces)),
        (5, "oscillation", criterion_5()),
        (6, "extended limits", criterion_6()),
        (7, "algebra of limits", criterion_7()),
        (8, "riemann nets", criterion_8()),
        (9, "sequence direction", criterion_9()),
        (10, "parser", criterion_10()),
        (11, "determinism", criterion_11()),
    ];
    let mut failed = 0;
    for (n, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {why}");
            }
        }
    }
    println!("{}/{} acceptance criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
