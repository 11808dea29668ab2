use std::path::PathBuf;

use serde_json::Value;

fn instance(name: &str) -> String {
    format!("{}/instances/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = ndgame::cli::run(std::iter::once("ndgame").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, out) = run(args);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

fn fraction(v: &Value) -> (i64, i64) {
    assert_eq!(v["eps_num"], 0, "{v}");
    (v["num"].as_i64().unwrap(), v["den"].as_i64().unwrap())
}

#[test]
fn analyze_fig_a_reports_popos() {
    let (code, r) = run_json(&["analyze", "--instance", &instance("fig-a.txt")]);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], 1);
    assert_eq!(fraction(&r["results"]["ratios"]["popos"]["limit"]), (286, 175));
    assert_eq!(fraction(&r["results"]["ratios"]["pos"]["limit"]), (1, 1));
    assert!(r["instance_digest"].as_str().unwrap().starts_with("sha256:"));
    let opt = &r["results"]["optimum"]["cost"];
    assert_eq!((opt["num"].as_i64(), opt["eps_num"].as_i64()), (Some(700), Some(3)));
}

#[test]
fn single_player_ratios_are_one() {
    let (code, r) = run_json(&["analyze", "--instance", &instance("single-player.txt")]);
    assert_eq!(code, 0);
    for q in ["pos", "poa", "popos", "popoa"] {
        assert_eq!(fraction(&r["results"]["ratios"][q]["limit"]), (1, 1), "{q}");
    }
}

#[test]
fn tiny_path_cap_exits_with_explosion() {
    let (code, r) = run_json(&["analyze", "--instance", &instance("k6.txt"), "--max-paths", "5"]);
    assert_eq!(code, 3);
    assert_eq!(r["error"]["kind"], "explosion");
    assert_eq!(r["error"]["detail"]["limit"], 5);
    let (code, r) = run_json(&["analyze", "--instance", &instance("k6.txt"), "--budget", "1000"]);
    assert_eq!(code, 3);
    assert_eq!(r["error"]["detail"]["what"], "strategy profiles");
}

#[test]
fn parse_errors_exit_two_with_position() {
    let path = scratch("broken.txt");
    std::fs::write(&path, "vertices: 2\nedge 0 x 1\nplayer 0 1\n").unwrap();
    let (code, r) = run_json(&["analyze", "--instance", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["detail"]["line"], 2);
    assert_eq!(r["error"]["detail"]["column"], 8);
    let (code, _) = run_json(&["analyze", "--instance", "/nonexistent/file.txt"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["analyze"]);
    assert_eq!(code, 2);
}

#[test]
fn bounds_for_small_k() {
    let (code, r) = run_json(&["bounds", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(fraction(&r["results"]["theorem_bound"]), (4, 3));
    let (_, r) = run_json(&["bounds", "--k", "3"]);
    assert_eq!(fraction(&r["results"]["theorem_bound"]), (165, 92));
    assert_eq!(fraction(&r["results"]["lemma1_factor"]), (15, 1));
    let (code, r) = run_json(&["bounds", "--k", "1"]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "precondition");
}

#[test]
fn dynamics_from_fig_a_optimum_takes_no_steps() {
    let (code, r) = run_json(&["dynamics", "--instance", &instance("fig-a.txt"), "--start", "optimum"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["step_count"], 0);
    let (code, r) = run_json(&[
        "dynamics",
        "--instance",
        &instance("fig-a.txt"),
        "--start",
        "random",
        "--seed",
        "3",
        "--schedule",
        "random",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["terminal_is_nash"], true);
    assert_eq!(r["results"]["potential_decreasing"], true);
}

#[test]
fn check_verdicts() {
    let (code, r) = run_json(&["check", "--instance", &instance("fig-a.txt"), "--lemma", "theorem"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["checks"]["theorem"]["verdict"], "holds");
    assert_eq!(fraction(&r["results"]["checks"]["theorem"]["popoa"]), (286, 175));
    let (code, r) = run_json(&["check", "--instance", &instance("disjoint-optimum.txt"), "--lemma", "1"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["checks"]["lemma1"]["verdict"], "not applicable: O^k empty");
    let (code, r) = run_json(&["check", "--instance", &instance("disjoint-optimum.txt"), "--lemma", "hk1"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["checks"]["hk1"]["verdict"], "holds");
    let (code, r) = run_json(&["check", "--instance", &instance("directed-hk-3.txt"), "--lemma", "all"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["checks"]["theorem"]["verdict"], "not applicable: directed game");
    assert_eq!(r["results"]["checks"]["instance"]["verdict"], "holds");
    for name in ["fig-a.txt", "fig-b.txt", "single-player.txt", "disjoint-optimum.txt"] {
        let (code, r) = run_json(&["check", "--instance", &instance(name), "--lemma", "all"]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(r["results"]["verdict"], "holds", "{name}");
    }
}

#[test]
fn generated_instances_analyze_as_expected() {
    let out = scratch("directed-hk-3.txt");
    let (code, _) = run_json(&["generate", "--family", "directed-hk", "--k", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (_, r) = run_json(&["analyze", "--instance", out.to_str().unwrap()]);
    assert_eq!(fraction(&r["results"]["ratios"]["pos"]["limit"]), (11, 6));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), std::fs::read_to_string(instance("directed-hk-3.txt")).unwrap());

    let out = scratch("fig-a.txt");
    let (code, g) = run_json(&["generate", "--family", "fig-a", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(g["results"]["details"]["all_claims_hold"], true);
    let (_, r) = run_json(&["analyze", "--instance", out.to_str().unwrap()]);
    assert_eq!(fraction(&r["results"]["ratios"]["popos"]["limit"]), (286, 175));
    assert_eq!(r["instance_digest"], g["results"]["digest"]);

    let (code, _) = run_json(&["generate", "--family", "directed-hk"]);
    assert_eq!(code, 2);
}

#[test]
fn search_with_budget_one_echoes_the_initial_point() {
    let spec = instance("k2-tight.toml");
    let (code, r) = run_json(&["search", "--spec", &spec, "--budget", "1"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["evaluations"], 1);
    assert_eq!(r["results"]["best"]["costs"], serde_json::json!([10, 10, 10, 10, 10, 10]));
}

#[test]
fn search_finds_the_two_player_tight_ratio() {
    let out = scratch("k2-tight.txt");
    let (code, r) = run_json(&["search", "--spec", &instance("k2-tight.toml"), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["exact_match"], true);
    assert_eq!(fraction(&r["results"]["best"]["pos"]), (4, 3));
    let (_, a) = run_json(&["analyze", "--instance", out.to_str().unwrap()]);
    assert_eq!(fraction(&a["results"]["ratios"]["pos"]["limit"]), (4, 3));
}

#[test]
fn bad_search_spec_exits_two() {
    let path = scratch("bad.toml");
    std::fs::write(&path, "objective = \"maximize-pos\"\nvertices = 2\nplayers = [[0, 1]]\nedges = []\n").unwrap();
    let (code, r) = run_json(&["search", "--spec", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "search-spec");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let commands: Vec<Vec<String>> = vec![
        vec!["analyze".into(), "--instance".into(), instance("fig-b.txt")],
        vec!["check".into(), "--instance".into(), instance("fig-a.txt"), "--lemma".into(), "all".into()],
        vec![
            "dynamics".into(),
            "--instance".into(),
            instance("k6.txt"),
            "--start".into(),
            "random".into(),
            "--schedule".into(),
            "random".into(),
            "--seed".into(),
            "9".into(),
        ],
        vec!["search".into(), "--spec".into(), instance("k2-tight.toml"), "--seed".into(), "4".into()],
        vec!["bounds".into(), "--k".into(), "7".into()],
    ];
    for c in &commands {
        let args: Vec<&str> = c.iter().map(String::as_str).collect();
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first, second, "{c:?}");
        assert_eq!(first.0, 0, "{c:?}: {}", first.1);
    }
}

#[test]
fn text_format_and_timing() {
    let (code, text) = run(&["analyze", "--instance", &instance("fig-a.txt"), "--format", "text"]);
    assert_eq!(code, 0);
    assert!(text.contains("limit: 286/175 (≈ 1.63428571429)"), "{text}");
    let (_, r) = run_json(&["bounds", "--k", "2", "--timing"]);
    assert!(r["timing"]["elapsed_ms"].is_number());
    let (_, r) = run_json(&["bounds", "--k", "2"]);
    assert!(r.get("timing").is_none());
}
