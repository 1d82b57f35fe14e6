use std::io::Write;
use std::process::{Command, Output, Stdio};

const F: &str = r"(\x. x [4, (\x. x) 3]) +";

fn applc(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_applc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn applc");
    {
        let mut input = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            input.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn all_backends_on_the_pair_example() {
    let o = applc(&["--backend", "all", "-e", F], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "beta: 7 (3 steps, normal-form)\n\
         ski: 7 (31 steps, normal-form)\n\
         cam: 7 (14 steps, normal-form)\n\
         sc: 7 (3 steps, normal-form)\n\
         agreement: true\n"
    );
}

#[test]
fn default_backend_prints_only_the_value() {
    let o = applc(&["-e", "add 2 (sub 10 3)"], None);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "9\n"));
}

#[test]
fn reads_standard_input_and_files() {
    let o = applc(&["--backend", "sc"], Some(F));
    assert_eq!(stdout(&o), "7\n");
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/corpus/church_mult.lam");
    let o = applc(&["--backend", "cam", path], None);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "12\n"));
}

#[test]
fn emit_compiled_forms() {
    let o = applc(&["--backend", "ski", "--emit", "-e", r"\x. x"], None);
    assert_eq!(stdout(&o), "I\n");
    let o = applc(&["--emit", "cam", "-e", F], None);
    assert_eq!(stdout(&o), "$[L($[0!, <'4, $[L(0!), '3]>]), L(+ o Snd)]\n");
    let o = applc(&["--emit", "sc", "-e", F], None);
    assert_eq!(stdout(&o), "$X x = x\n$Y x = x [4, $X 3]\n----\n$Y +\n");
    let o = applc(&["--emit", "ski", "-e", r"(\x. x 4 ((\x. x) 3)) add"], None);
    assert_eq!(stdout(&o), "S (S I (K 4)) (S (K I) (K 3)) add\n");
    let o = applc(&["--emit", "ski", "--ski-mode", "optimized", "-e", r"\x. (\y. y) 3"], None);
    assert_eq!(stdout(&o), "K (I 3)\n");
}

#[test]
fn traces_follow_each_backend_format() {
    let o = applc(&["--backend", "sc", "--trace", "-e", F], None);
    assert_eq!(stdout(&o), "step 0: $Y +\nstep 1: + [4, $X 3]\nstep 2: + [4, 3]\nstep 3: 7\n7\n");
    let o = applc(&["--trace", "-e", F], None);
    assert!(stdout(&o).starts_with("step 0: (\\x. x [4, (\\x. x) 3]) +\nstep 1: + [4, (\\x. x) 3]\n"));
    let o = applc(&["--backend", "cam", "--trace", "-e", F], None);
    let out = stdout(&o);
    assert!(out.contains("step 1: eps[L($[0!, <'4, $[L(0!), '3]>])(), L(+ o Snd)()]  (dollar)\n"), "{out}");
    assert!(out.ends_with("step 14: 7  (delta)\n7\n"), "{out}");
}

#[test]
fn type_flag() {
    let o = applc(&["--type", "-e", r"\x y z. x (y z)"], None);
    assert_eq!(stdout(&o), "(b -> c) -> (a -> b) -> a -> c\n");
    let o = applc(&["--type", "-e", r"\x. x"], None);
    assert_eq!(stdout(&o), "a -> a\n");
    let o = applc(&["--type", "-e", r"\x. x x"], None);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("occurs check"), "{}", stderr(&o));
    let o = applc(&["--type", "--json", "-e", r"\x. x"], None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["type"], "a -> a");
}

#[test]
fn json_report_shape() {
    let o = applc(&["--backend", "all", "--json", "-e", F], None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["source"], F);
    assert_eq!(v["agreement"], true);
    let backends = v["backends"].as_array().unwrap();
    let names: Vec<_> = backends.iter().map(|b| b["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["beta", "ski", "cam", "sc"]);
    for b in backends {
        assert_eq!(b["result"], "7");
        assert_eq!(b["status"], "normal-form");
        assert!(b["steps"].as_u64().unwrap() > 0);
        assert!(b["compiled"].is_string());
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| applc(args, None).status.code();
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["--frobnicate"]), Some(1));
    assert_eq!(code(&["--max-steps", "0", "-e", "1"]), Some(1));
    assert_eq!(code(&["--backend", "all", "--emit", "-e", "1"]), Some(1));
    assert_eq!(code(&["--backend", "nope", "-e", "1"]), Some(1));
    assert_eq!(code(&["/no/such/file.lam"]), Some(1));
    assert_eq!(code(&["-e", "(\\x. x"]), Some(2));
    assert_eq!(code(&["--backend", "cam", "-e", r"\x. y"]), Some(4));
    assert_eq!(code(&["--max-steps", "50", "-e", r"(\x. x x) (\x. x x)"]), Some(4));
    assert_eq!(code(&["-e", "sub -9223372036854775807 2"]), Some(4));
}

#[test]
fn parse_errors_report_position() {
    let o = applc(&["-e", "f\n  ]"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("2:3"), "{}", stderr(&o));
}

#[test]
fn budget_exhaustion_is_reported() {
    let o = applc(&["--max-steps", "50", "-e", r"(\x. x x) (\x. x x)"], None);
    assert!(stdout(&o).ends_with("budget exhausted after 50 steps\n"), "{}", stdout(&o));
}
