//! Acceptance suite: one line per criterion, then a single pass/fail verdict.
//!
//! Runs without the libtest harness so the lines are always shown:
//! `cargo test -p hybrid-ide-core --test acceptance`.

mod common;

use std::time::Instant;

use common::*;
use hybrid_ide::expansion::product_coeff;
use hybrid_ide::exprlang::parse;
use hybrid_ide::kernel::fredholm_operator;
use hybrid_ide::operational::build_p;
use hybrid_ide::{
    solve_system, BasisConfig, CoeffVector, KernelFunction, MatrixFunction, Partition, Projector,
    SystemSpec,
};

type Outcome = Result<String, String>;

fn check(cond: bool, ok: String, fail: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(fail)
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Criterion 1: Example 1 coefficients and pointwise exactness.
fn example1_coefficients() -> Outcome {
    const TOL: f64 = 1e-10;
    let start = Instant::now();
    let cfg = BasisConfig::uniform(0.0, 1.0, 3, 4).unwrap();
    let sol = solve_system(&example1(), &cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();

    // published fractions, [component][block][degree]
    let printed: [[[f64; 4]; 3]; 2] = [
        [
            [5.0 / 144.0, 1.0 / 36.0, 1.0 / 144.0, 0.0],
            [37.0 / 144.0, 1.0 / 12.0, 1.0 / 144.0, 0.0],
            [101.0 / 144.0, 5.0 / 36.0, 1.0 / 144.0, 0.0],
        ],
        [
            [7.0 / 864.0, 7.0 / 864.0, 1.0 / 128.0, 1.0 / 1728.0],
            [13.0 / 96.0, 55.0 / 864.0, 1.0 / 96.0, 1.0 / 1728.0],
            [515.0 / 864.0, 151.0 / 864.0, 5.0 / 288.0, 1.0 / 1728.0],
        ],
    ];
    // The printed list is meant to be the expansion of the exact solution
    // [t^2, t^3]; any entry that disagrees with the brute-force expansion of
    // the exact solution is a typesetting slip and is replaced by the oracle.
    let exact = [|t: f64| t * t, |t: f64| t * t * t];
    let mut misprints = Vec::new();
    let mut worst = 0.0_f64;
    for c in 0..2 {
        for k in 0..3 {
            let (lo, hi) = cfg.partition().bounds(k);
            for m in 0..4 {
                let oracle = brute_coeff(exact[c], lo, hi, m);
                let mut expected = printed[c][k][m];
                if (expected - oracle).abs() > TOL {
                    misprints.push((c, k, m, expected, oracle));
                    expected = oracle;
                }
                worst = worst.max((sol.coeffs().get(k, m, c) - expected).abs());
            }
        }
    }
    // exactly one known slip: x2, block 1, degree 2 printed as 1/128 (exact 1/288)
    let slip_ok = misprints.len() == 1
        && misprints[0].0 == 1
        && misprints[0].1 == 0
        && misprints[0].2 == 2
        && (misprints[0].4 - 1.0 / 288.0).abs() < 1e-15;

    let mut pointwise = 0.0_f64;
    for i in 0..=100 {
        let t = i as f64 / 100.0;
        let v = sol.evaluate(t).unwrap();
        pointwise = pointwise.max(max_abs_diff(&v, &[t * t, t * t * t]));
    }
    check(
        worst <= TOL && slip_ok && pointwise <= TOL && elapsed < 1.0,
        format!(
            "max coeff error {worst:.2e}, max |x - [t^2,t^3]| {pointwise:.2e} on 101 points, \
             {elapsed:.3}s (printed x2 block1 deg2 = 1/128 differs from exact 1/288; \
             checked against the exact value)"
        ),
        format!(
            "coeff error {worst:.2e}, pointwise {pointwise:.2e}, {elapsed:.3}s, misprints {misprints:?}"
        ),
    )
}

fn example2_errors(blocks: usize, degrees: usize) -> (f64, f64) {
    let cfg = BasisConfig::uniform(0.0, 1.0, blocks, degrees).unwrap();
    let sol = solve_system(&example2(), &cfg).unwrap();
    let mut vs_exact = 0.0_f64;
    let mut vs_table_m5 = 0.0_f64;
    for (i, &t) in table_times().iter().enumerate() {
        let v = sol.evaluate(t).unwrap();
        vs_exact = vs_exact.max(max_abs_diff(&v, &example2_exact(t)));
        vs_table_m5 = vs_table_m5.max(max_abs_diff(&v, &TABLE_M5[i]));
    }
    (vs_exact, vs_table_m5)
}

/// The block count whose M = 5 solution is closest to the published column.
fn calibrated_blocks() -> usize {
    let k3 = example2_errors(3, 5).1;
    let k4 = example2_errors(4, 5).1;
    if k4 <= k3 {
        4
    } else {
        3
    }
}

/// Criterion 2: Example 2 at M = 9.
fn example2_high_order() -> Outcome {
    const TOL: f64 = 1e-11;
    let blocks = calibrated_blocks();
    let start = Instant::now();
    let cfg = BasisConfig::uniform(0.0, 1.0, blocks, 9).unwrap();
    let sol = solve_system(&example2(), &cfg).map_err(|e| e.to_string())?;
    let mut worst = 0.0_f64;
    let mut vs_analytic_column = 0.0_f64;
    for (i, &t) in table_times().iter().enumerate() {
        let v = sol.evaluate(t).unwrap();
        worst = worst.max(max_abs_diff(&v, &example2_exact(t)));
        vs_analytic_column = vs_analytic_column.max(max_abs_diff(&v, &TABLE_ANALYTIC[i]));
    }
    let elapsed = start.elapsed().as_secs_f64();
    check(
        worst <= TOL && elapsed < 5.0,
        format!(
            "K = {blocks}: max |x - [e^-t, 3e^-t]| = {worst:.2e} at t = 0.1..1.0 \
             (vs printed analytic column {vs_analytic_column:.2e}), {elapsed:.3}s"
        ),
        format!("K = {blocks}: error {worst:.2e}, {elapsed:.3}s"),
    )
}

/// Criterion 3: M = 5 error magnitude and monotone convergence.
fn example2_low_order() -> Outcome {
    let blocks = calibrated_blocks();
    let errs: Vec<f64> = [5, 7, 9]
        .iter()
        .map(|&m| example2_errors(blocks, m).0)
        .collect();
    let (_, m5_vs_table) = example2_errors(blocks, 5);
    let in_band = (1e-9..=1e-6).contains(&errs[0]);
    let monotone = errs[0] > errs[1] && errs[1] > errs[2];
    check(
        in_band && monotone,
        format!(
            "K = {blocks}: max errors M=5 {:.2e}, M=7 {:.2e}, M=9 {:.2e}; \
             M=5 vs published column {m5_vs_table:.2e}",
            errs[0], errs[1], errs[2]
        ),
        format!("K = {blocks}: errors {errs:?}"),
    )
}

/// Random per-block polynomial with `n` components, degree `deg` in `t`.
fn random_piecewise(rng: &mut Rng, blocks: usize, n: usize, deg: usize) -> Vec<Vec<Vec<f64>>> {
    (0..blocks)
        .map(|_| {
            (0..n)
                .map(|_| (0..=deg).map(|_| rng.uniform(-2.0, 2.0)).collect())
                .collect()
        })
        .collect()
}

fn random_partition(rng: &mut Rng, blocks: usize) -> Partition {
    let t0 = rng.uniform(-1.0, 1.0);
    let mut pts = vec![t0];
    for _ in 0..blocks {
        let last = *pts.last().unwrap();
        pts.push(last + rng.uniform(0.1, 1.0));
    }
    Partition::new(pts).unwrap()
}

fn poly_integral(c: &[f64], a: f64, b: f64) -> f64 {
    c.iter()
        .enumerate()
        .map(|(i, ci)| ci * (b.powi(i as i32 + 1) - a.powi(i as i32 + 1)) / (i as f64 + 1.0))
        .sum()
}

/// Criterion 4: integration through `P^T (x) I_n`.
fn operational_property() -> Outcome {
    const TOL: f64 = 1e-11;
    let mut rng = Rng::new(0x5eed_0004);
    let mut worst = 0.0_f64;
    let mut nonuniform = 0;
    for case in 0..20 {
        let m = 3 + case % 6;
        let blocks = 1 + rng.below(4);
        let n = 1 + rng.below(3);
        let part = if case % 2 == 0 {
            nonuniform += 1;
            random_partition(&mut rng, blocks)
        } else {
            Partition::uniform(0.0, 1.0, blocks).unwrap()
        };
        let cfg = BasisConfig::new(part.clone(), m).unwrap();
        let polys = random_piecewise(&mut rng, blocks, n, m - 2);

        let mut f = CoeffVector::zeros(blocks, m, n);
        let mut integral = CoeffVector::zeros(blocks, m, n);
        for k in 0..blocks {
            let (lo, hi) = part.bounds(k);
            for c in 0..n {
                // value of the running integral at the left end of block k
                let carry: f64 = (0..k)
                    .map(|j| {
                        let (a, b) = part.bounds(j);
                        poly_integral(&polys[j][c], a, b)
                    })
                    .sum();
                let p = &polys[k][c];
                for deg in 0..m {
                    f.set(k, deg, c, brute_coeff(|t| poly_eval(p, t), lo, hi, deg));
                    let anti = |t: f64| carry + poly_integral(p, lo, t);
                    integral.set(k, deg, c, brute_coeff(anti, lo, hi, deg));
                }
            }
        }
        let op = build_p(&cfg).integration_operator(n);
        let got = op.matvec(f.as_slice()).unwrap();
        let scale = 1.0
            + integral
                .as_slice()
                .iter()
                .fold(0.0_f64, |a, v| a.max(v.abs()));
        worst = worst.max(max_abs_diff(&got, integral.as_slice()) / scale);
    }
    check(
        worst <= TOL,
        format!("20 random cases ({nonuniform} non-uniform), max scaled error {worst:.2e}"),
        format!("max scaled error {worst:.2e}"),
    )
}

/// Criterion 5: linearisation coefficients vs brute-force quadrature.
fn product_coefficients() -> Outcome {
    let rule = brute_rule();
    let mut worst = 0.0_f64;
    let mut rule_mismatch = 0;
    for i in 0..=10 {
        for j in 0..=10 {
            for m in 0..=10 {
                let brute = 2.0 / std::f64::consts::PI
                    * rule
                        .iter()
                        .map(|&(th, w)| w * u_closed(i, th) * u_closed(j, th) * u_closed(m, th))
                        .sum::<f64>();
                let got = product_coeff(i, j, m);
                worst = worst.max((got - brute).abs());
                let rule_value = if i.abs_diff(j) <= m && m <= i + j && (i + j + m) % 2 == 0 {
                    1.0
                } else {
                    0.0
                };
                if got != rule_value {
                    rule_mismatch += 1;
                }
            }
        }
    }
    check(
        worst <= 1e-12 && rule_mismatch == 0,
        format!("1331 triples, max |d - quadrature| {worst:.2e}, exact 0/1 rule"),
        format!("max deviation {worst:.2e}, {rule_mismatch} rule mismatches"),
    )
}

fn fredholm_case(
    kernel: KernelFunction,
    f: Vec<Box<dyn Fn(f64) -> f64 + Send + Sync>>,
    cfg: &BasisConfig,
) -> f64 {
    let n = kernel.dim();
    let t0 = cfg.partition().t0();
    let tf = cfg.partition().tf();
    let q = fredholm_operator(&kernel, cfg).unwrap();
    let f = std::sync::Arc::new(f);
    let fc = f.clone();
    let projector = Projector::with_order(cfg, cfg.degrees() + 20).unwrap();
    let fhat = projector
        .expand_vector(&MatrixFunction::from_fn(n, 1, move |t| {
            fc.iter().map(|g| g(t)).collect()
        }))
        .unwrap();
    let kk = kernel.clone();
    // w(t) = int N(t, s) f(s) ds by composite Gauss-Legendre
    let w_exact = MatrixFunction::from_fn(n, 1, move |t| {
        (0..n)
            .map(|i| {
                integrate(
                    |s| {
                        let mut nv = vec![0.0; n * n];
                        kk.eval_into(t, s, &mut nv).unwrap();
                        (0..n).map(|j| nv[i * n + j] * f[j](s)).sum()
                    },
                    t0,
                    tf,
                    8,
                    20,
                )
            })
            .collect()
    });
    let expected = projector.expand_vector(&w_exact).unwrap();
    let got = q.apply(&fhat).unwrap();
    max_abs_diff(got.as_slice(), expected.as_slice())
}

type ScalarFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

fn poly_fn(c: Vec<f64>) -> ScalarFn {
    Box::new(move |t| poly_eval(&c, t))
}

/// Criterion 6: Fredholm operator vs direct 2-D quadrature.
fn fredholm_oracle() -> Outcome {
    const TOL: f64 = 1e-9;
    let mut worst = 0.0_f64;
    let mut rng = Rng::new(0x5eed_0006);

    // Example kernels with polynomial inputs whose product with the kernel stays
    // within the degree range in the integration variable.
    for (kernel, s_degree) in [(example1().kernel, 1), (example2().kernel, 2)] {
        for (blocks, m) in [(3, 4), (4, 5), (2, 7)] {
            let cfg = BasisConfig::uniform(0.0, 1.0, blocks, m).unwrap();
            let deg = m - 1 - s_degree;
            let f: Vec<ScalarFn> = (0..2)
                .map(|_| poly_fn((0..=deg).map(|_| rng.uniform(-1.0, 1.0)).collect()))
                .collect();
            worst = worst.max(fredholm_case(kernel.clone(), f, &cfg));
        }
    }

    for case in 0..20 {
        let m = 3 + case % 5;
        let blocks = 1 + rng.below(3);
        let n = 1 + rng.below(2);
        let part = if case % 3 == 0 {
            random_partition(&mut rng, blocks)
        } else {
            Partition::uniform(0.0, 1.0, blocks).unwrap()
        };
        let cfg = BasisConfig::new(part, m).unwrap();
        let s_deg = rng.below(m - 1);
        let t_deg = rng.below(m - 1);
        let f_deg = rng.below(m - s_deg);
        // coefficients c[i][j][a][b] of t^a s^b
        let coeffs: Vec<Vec<Vec<f64>>> = (0..n * n)
            .map(|_| {
                (0..=t_deg)
                    .map(|_| (0..=s_deg).map(|_| rng.uniform(-1.0, 1.0)).collect())
                    .collect()
            })
            .collect();
        let kernel = KernelFunction::from_fn(n, move |t, s| {
            coeffs
                .iter()
                .map(|entry| {
                    entry
                        .iter()
                        .enumerate()
                        .map(|(a, row)| t.powi(a as i32) * poly_eval(row, s))
                        .sum()
                })
                .collect()
        });
        let f: Vec<ScalarFn> = (0..n)
            .map(|_| poly_fn((0..=f_deg).map(|_| rng.uniform(-1.0, 1.0)).collect()))
            .collect();
        worst = worst.max(fredholm_case(kernel, f, &cfg));
    }
    check(
        worst <= TOL,
        format!("6 example-kernel cases + 20 random kernels, max error {worst:.2e}"),
        format!("max error {worst:.2e}"),
    )
}

struct OdeCase {
    name: &'static str,
    spec: SystemSpec,
    rhs: Box<dyn Fn(f64, &[f64]) -> Vec<f64>>,
}

fn ode_cases() -> Vec<OdeCase> {
    vec![
        OdeCase {
            name: "scalar decay with forcing",
            spec: SystemSpec {
                t0: 0.0,
                tf: 1.0,
                x0: vec![1.0],
                a: MatrixFunction::constant(1, 1, vec![-2.0]),
                b: MatrixFunction::scalar(|t| (3.0 * t).sin()),
                kernel: KernelFunction::zeros(1),
                u: MatrixFunction::constant(1, 1, vec![1.0]),
            },
            rhs: Box::new(|t, x| vec![-2.0 * x[0] + (3.0 * t).sin()]),
        },
        OdeCase {
            name: "damped oscillator",
            spec: SystemSpec {
                t0: 0.0,
                tf: 2.0,
                x0: vec![1.0, 0.0],
                a: MatrixFunction::constant(2, 2, vec![0.0, 1.0, -4.0, -0.5]),
                b: MatrixFunction::constant(2, 1, vec![0.0, 1.0]),
                kernel: KernelFunction::zeros(2),
                u: MatrixFunction::scalar(|t| t.cos()),
            },
            rhs: Box::new(|t, x| vec![x[1], -4.0 * x[0] - 0.5 * x[1] + t.cos()]),
        },
        OdeCase {
            name: "time-varying 2x2",
            spec: SystemSpec {
                t0: 0.0,
                tf: 1.5,
                x0: vec![0.5, -1.0],
                a: MatrixFunction::from_fn(2, 2, |t| vec![-t, 1.0, 0.5, t.cos()]),
                b: MatrixFunction::from_fn(2, 1, |t| vec![(-t).exp(), t]),
                kernel: KernelFunction::zeros(2),
                u: MatrixFunction::scalar(|t| 1.0 + t * t),
            },
            rhs: Box::new(|t, x| {
                let u = 1.0 + t * t;
                vec![
                    -t * x[0] + x[1] + (-t).exp() * u,
                    0.5 * x[0] + t.cos() * x[1] + t * u,
                ]
            }),
        },
    ]
}

/// Criterion 7: zero-kernel systems vs fixed-step RK4.
fn ode_cross_check() -> Outcome {
    const TOL: f64 = 1e-6;
    let mut details = Vec::new();
    let mut worst = 0.0_f64;
    for case in ode_cases() {
        let spec = &case.spec;
        let cfg = BasisConfig::uniform(spec.t0, spec.tf, 4, 10).unwrap();
        let sol = solve_system(spec, &cfg).unwrap();
        let times: Vec<f64> = (1..=20)
            .map(|i| spec.t0 + (spec.tf - spec.t0) * i as f64 / 20.0)
            .collect();
        let reference = rk4(&case.rhs, spec.t0, &spec.x0, 1e-4, &times);
        let err = times
            .iter()
            .zip(&reference)
            .map(|(&t, r)| max_abs_diff(&sol.evaluate(t).unwrap(), r))
            .fold(0.0, f64::max);
        worst = worst.max(err);
        details.push(format!("{} {err:.1e}", case.name));
    }
    check(
        worst <= TOL,
        format!("max deviation {worst:.2e} ({})", details.join(", ")),
        format!("max deviation {worst:.2e} ({})", details.join(", ")),
    )
}

/// Criterion 8: expression-language fixtures.
fn expression_fixtures() -> Outcome {
    type Closure = fn(f64, f64) -> f64;
    let entries: Vec<(&str, Closure)> = vec![
        // Example 1
        ("t^2+1", |t, _| t * t + 1.0),
        ("-t", |t, _| -t),
        ("0", |_, _| 0.0),
        ("1", |_, _| 1.0),
        ("s", |_, s| s),
        ("3", |_, _| 3.0),
        ("3*t^2", |t, _| 3.0 * t * t),
        ("-(t-1)^2", |t, _| -(t - 1.0) * (t - 1.0)),
        ("2*t^2-t^3", |t, _| 2.0 * t * t - t * t * t),
        ("t^3", |t, _| t * t * t),
        // Example 2
        ("t", |t, _| t),
        ("3*s", |_, s| 3.0 * s),
        ("3*s^2", |_, s| 3.0 * s * s),
        ("exp(-t)-s^2", |t, s| (-t).exp() - s * s),
        ("3*t^2+s*exp(-t)", |t, s| 3.0 * t * t + s * (-t).exp()),
        ("-t^2", |t, _| -t * t),
        ("3*exp(-1)-5-3*t", |t, _| {
            3.0 * (-1.0f64).exp() - 5.0 - 3.0 * t
        }),
        ("2*exp(-1)-7-t-3*t^2", |t, _| {
            2.0 * (-1.0f64).exp() - 7.0 - t - 3.0 * t * t
        }),
        ("exp(-t)", |t, _| (-t).exp()),
        ("3*exp(-t)", |t, _| 3.0 * (-t).exp()),
    ];
    let mut worst = 0.0_f64;
    for (src, closure) in &entries {
        let expr = parse(src).map_err(|e| format!("{src}: {e}"))?;
        for i in 0..50 {
            let t = i as f64 / 49.0;
            let s = 1.0 - t;
            let v = expr.eval(t, s).map_err(|e| format!("{src}: {e}"))?;
            worst = worst.max((v - closure(t, s)).abs());
        }
    }
    let ev = |src: &str| parse(src).unwrap().eval(0.0, 0.0).unwrap();
    let precedence = ev("2+3*4") == 14.0
        && ev("2*3^2") == 18.0
        && ev("(-2)^2") == 4.0
        && ev("2^3^2") == 512.0
        && ev("-2^2") == -4.0
        && parse("-(t-1)^2").unwrap().eval(3.0, 0.0).unwrap() == -4.0
        && parse("3t").is_err();
    check(
        worst <= 1e-14 && precedence,
        format!(
            "{} entry strings on 50-point grids, max deviation {worst:.1e}; precedence fixtures hold",
            entries.len()
        ),
        format!("max deviation {worst:.1e}, precedence fixtures ok: {precedence}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        (
            "1 Example 1 coefficient reproduction",
            example1_coefficients,
        ),
        ("2 Example 2 high-order agreement", example2_high_order),
        ("3 Example 2 low-order error magnitude", example2_low_order),
        ("4 Operational-matrix property", operational_property),
        ("5 Product-coefficient oracle", product_coefficients),
        ("6 Fredholm operator oracle", fredholm_oracle),
        ("7 Zero-kernel ODE cross-check", ode_cross_check),
        ("8 Expression language fixtures", expression_fixtures),
    ];
    let mut failures = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                println!("FAIL  criterion {name}: {detail}");
                failures.push(name);
            }
        }
    }
    if failures.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
    } else {
        println!("acceptance: failed criteria {failures:?}");
        std::process::exit(1);
    }
}
