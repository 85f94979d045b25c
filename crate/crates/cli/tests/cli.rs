//! End-to-end tests of the command-line interface and its exit-code
//! contract: 0 success, 1 parse error, 2 resonance/conditioning, 3
//! verification failure.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_helmlayer"))
}

fn doc(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/examples")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn helmlayer")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn solve_is_deterministic() {
    let a = run(&["solve", "--input", &doc("slab-dirichlet-squares.json")]);
    let b = run(&["solve", "--input", &doc("slab-dirichlet-squares.json")]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("\"uniqueness\": \"unique_slow_growth\""));
}

#[test]
fn solve_reads_stdin() {
    use std::io::Write;
    let mut child = bin()
        .arg("solve")
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(
            std::fs::read(doc("slab-dirichlet-squares.json"))
                .unwrap()
                .as_slice(),
        )
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
}

#[test]
fn particular_only_emits_polynomial() {
    // P = 3x₁²x₂y² + 5x₁x₂²y in circular mode (ν = μ²):
    // ũ = P/μ² − (6x₂y² + 10x₁y + 6x₁²x₂)/μ⁴ + 24x₂/μ⁶.
    let out = run(&[
        "solve",
        "--particular-only",
        "--input",
        &doc("particular-two-vars.json"),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rendered = doc["text"].as_str().unwrap();
    assert_eq!(
        rendered,
        "24*x2/mu^6 - 6*x2*y^2/mu^4 - 10*x1*y/mu^4 + 5*x1*x2^2*y/mu^2 \
         - 6*x1^2*x2/mu^4 + 3*x1^2*x2*y^2/mu^2"
    );
}

#[test]
fn verify_passes_and_check_solution_catches_corruption() {
    let tmp = std::env::temp_dir().join("helmlayer-cli-test");
    std::fs::create_dir_all(&tmp).unwrap();
    let sol_path = tmp.join("solution.json");
    let out = run(&[
        "solve",
        "--input",
        &doc("slab-dirichlet-squares.json"),
        "--output",
        sol_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    // The emitted solution verifies.
    let out = run(&[
        "verify",
        "--input",
        &doc("slab-dirichlet-squares.json"),
        "--check-solution",
        sol_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stdout(&out));

    // Corrupt one coefficient: exit 3.
    let text = std::fs::read_to_string(&sol_path).unwrap();
    let corrupted = text.replacen("\"-8\"", "\"-7999/1000\"", 1);
    assert_ne!(text, corrupted);
    let bad_path = tmp.join("corrupted.json");
    std::fs::write(&bad_path, corrupted).unwrap();
    let out = run(&[
        "verify",
        "--input",
        &doc("slab-dirichlet-squares.json"),
        "--check-solution",
        bad_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_poisson_limit() {
    for (problem, limit) in [
        (
            "slab-dirichlet-squares.json",
            "slab-dirichlet-squares-limit.json",
        ),
        ("slab-mixed-squares.json", "slab-mixed-squares-limit.json"),
        ("slab-circular-3d.json", "slab-circular-3d-limit.json"),
    ] {
        let out = run(&[
            "verify",
            "--input",
            &doc(problem),
            "--poisson-limit",
            &doc(limit),
        ]);
        assert!(out.status.success(), "{problem}: {}", stdout(&out));
        assert!(stdout(&out).contains("poisson_limit"));
    }
}

#[test]
fn eval_boundary_and_interior() {
    let out = run(&[
        "eval",
        "--input",
        &doc("slab-dirichlet-squares.json"),
        "--at",
        "x=0.4;y=0;kappa=1;a=1.25",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0.00000000000000");

    // Interior point against an independent transcription of the closed form.
    let out = run(&[
        "eval",
        "--input",
        &doc("slab-dirichlet-squares.json"),
        "--at",
        "x=0.5;y=0.625;kappa=1;a=1.25",
    ]);
    assert!(out.status.success());
    let got: f64 = stdout(&out).trim().parse().unwrap();
    let (x, y, l, a): (f64, f64, f64, f64) = (0.5, 0.625, 1.0, 1.25);
    let (sh, ch) = (|v: f64| v.sinh(), |v: f64| v.cosh());
    let expected = -x * x * y * y / l.powi(2)
        - 2.0 * y * y / l.powi(4)
        - 2.0 * x * x / l.powi(4)
        - 8.0 / l.powi(6)
        + a * a * x * x * sh(l * y) / (l.powi(2) * sh(l * a))
        - a * a * y * ch(l * y) / (l.powi(3) * sh(l * a))
        + a.powi(3) * sh(l * y) * ch(l * a) / (l.powi(3) * sh(l * a).powi(2))
        + sh(l * y) * (2.0 * x * x + 2.0 * a * a - 2.0 * x * x * ch(l * a))
            / (l.powi(4) * sh(l * a))
        + 2.0 * y * ch(l * y) * (ch(l * a) - 1.0) / (l.powi(5) * sh(l * a))
        + 2.0 * a * sh(l * y) * ch(l * a) * (1.0 - ch(l * a)) / (l.powi(5) * sh(l * a).powi(2))
        + 8.0 * sh(l * y) * (1.0 - ch(l * a)) / (l.powi(6) * sh(l * a))
        + 2.0 * x * x * ch(l * y) / l.powi(4)
        + 2.0 * (a - y) * sh(l * y) / l.powi(5)
        + 8.0 * ch(l * y) / l.powi(6);
    assert!((got - expected).abs() <= 1e-10 * expected.abs().max(1.0));
}

#[test]
fn eval_solution_document_directly() {
    let tmp = std::env::temp_dir().join("helmlayer-cli-test");
    std::fs::create_dir_all(&tmp).unwrap();
    let sol_path = tmp.join("eval-solution.json");
    let out = run(&[
        "solve",
        "--input",
        &doc("slab-mixed-squares.json"),
        "--output",
        sol_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let at = "x=0.3;y=0.7;kappa=0.9;a=1.25";
    let via_solution = run(&["eval", "--solution", sol_path.to_str().unwrap(), "--at", at]);
    let via_problem = run(&[
        "eval",
        "--input",
        &doc("slab-mixed-squares.json"),
        "--at",
        at,
    ]);
    assert!(via_solution.status.success() && via_problem.status.success());
    assert_eq!(stdout(&via_solution), stdout(&via_problem));
}

#[test]
fn three_dimensional_circular_problem() {
    // μ = 1 < π/2: solvable, unique, with deterministic output.
    let out = run(&["solve", "--input", &doc("slab-circular-3d.json")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"uniqueness\": \"unique_slow_growth\""));
    assert!(text.contains("cos_ka"));
    let out2 = run(&[
        "verify",
        "--input",
        &doc("slab-circular-3d.json"),
        "--grid",
        "3",
        "--fd-step",
        "5e-4",
        "--tol-fd",
        "1e-5",
    ]);
    assert!(out2.status.success(), "{}", stdout(&out2));
}

#[test]
fn boundary_data_round_trip() {
    // φ = 3x² − 1 at y = 0: the solution evaluates to φ there.
    let out = run(&[
        "eval",
        "--input",
        &doc("boundary-data.json"),
        "--at",
        "x=0.5;y=0;kappa=1;a=1",
    ]);
    assert!(out.status.success());
    let got: f64 = stdout(&out).trim().parse().unwrap();
    assert!((got - (3.0 * 0.25 - 1.0)).abs() < 1e-12);
}

#[test]
fn empty_data_solves_to_zero() {
    let tmp = std::env::temp_dir().join("helmlayer-cli-test");
    std::fs::create_dir_all(&tmp).unwrap();
    let path = tmp.join("empty.json");
    std::fs::write(
        &path,
        r#"{ "dimension": 2, "a": "1", "mode": "hyperbolic", "kappa": "1", "bc": "dirichlet" }"#,
    )
    .unwrap();
    let out = run(&["solve", "--input", path.to_str().unwrap()]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["terms"].as_array().unwrap().len(), 0);
    assert_eq!(doc["text"].as_str().unwrap(), "0");
}

#[test]
fn eval_seed_solution_on_top_face() {
    // ψ = 1 with zero P and φ solves to S(κy)/S(κa), which is exactly 1 on
    // the top face for any κ and a.
    let tmp = std::env::temp_dir().join("helmlayer-cli-test");
    std::fs::create_dir_all(&tmp).unwrap();
    let path = tmp.join("seed.json");
    std::fs::write(
        &path,
        r#"{
            "dimension": 1, "a": "1", "mode": "hyperbolic", "kappa": "1",
            "bc": "dirichlet", "psi": [ { "coeff": "1", "x": [0] } ]
        }"#,
    )
    .unwrap();
    let out = run(&[
        "eval",
        "--input",
        path.to_str().unwrap(),
        "--at",
        "x=0.3;y=1;kappa=0.8;a=1",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1.00000000000000");
}

#[test]
fn exit_code_conditioning_on_eval() {
    // Solving at μ = 1 is fine, but evaluating the circular solution at a
    // point where sin(κa) underflows the conditioning floor is refused.
    let tmp = std::env::temp_dir().join("helmlayer-cli-test");
    std::fs::create_dir_all(&tmp).unwrap();
    let path = tmp.join("circ.json");
    std::fs::write(
        &path,
        r#"{
            "dimension": 1, "a": "1", "mode": "circular", "kappa": "1",
            "bc": "dirichlet", "psi": [ { "coeff": "1", "x": [0] } ]
        }"#,
    )
    .unwrap();
    let out = run(&[
        "eval",
        "--input",
        path.to_str().unwrap(),
        "--at",
        "x=0.3;y=0.5;kappa=3.141592653589793;a=1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_code_parse_error() {
    let tmp = std::env::temp_dir().join("helmlayer-cli-test");
    std::fs::create_dir_all(&tmp).unwrap();
    let bad = tmp.join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(&["solve", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    // Unknown flag is a usage/parse error too.
    let out = run(&["solve", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_code_resonance() {
    let tmp = std::env::temp_dir().join("helmlayer-cli-test");
    std::fs::create_dir_all(&tmp).unwrap();
    let resonant = tmp.join("resonant.json");
    // μa numerically at π.
    std::fs::write(
        &resonant,
        r#"{
            "dimension": 1,
            "a": "1",
            "mode": "circular",
            "kappa": "314159265358979323/100000000000000000",
            "bc": "dirichlet",
            "P": [ { "coeff": "1", "x": [0], "y": 1 } ]
        }"#,
    )
    .unwrap();
    let out = run(&["solve", "--input", resonant.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kernels_output_is_frozen() {
    let out = run(&[
        "kernels",
        "--family",
        "dirichlet",
        "--mode",
        "circular",
        "--m",
        "0",
    ]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "text:  sin(mu*y)/sin(mu*a)\nlatex: \\frac{\\sin(\\mu y)}{\\sin(\\mu a)}\n"
    );
    let out = run(&[
        "kernels",
        "--family",
        "dn-q",
        "--mode",
        "hyperbolic",
        "--m",
        "0",
    ]);
    assert_eq!(
        stdout(&out),
        "text:  sinh(lambda*y)/(lambda*cosh(lambda*a))\n\
         latex: \\frac{\\sinh(\\lambda y)}{\\lambda \\cosh(\\lambda a)}\n"
    );
    // Multi-index variant: p_{2(2,1,1)} = p₈/35, whose leading canonical
    // term is 1575/35 = 45 times the a·S·C/(λ⁷S²) monomial.
    let out = run(&[
        "kernels",
        "--family",
        "dirichlet",
        "--mode",
        "hyperbolic",
        "--multiindex",
        "2,1,1",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out)
        .starts_with("text:  45*a*sinh(lambda*y)*cosh(lambda*a)/(lambda^7*sinh(lambda*a)^2)"));
    // Invalid family: parse error.
    let out = run(&[
        "kernels", "--family", "neumann", "--mode", "circular", "--m", "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
}
