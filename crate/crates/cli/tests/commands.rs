mod common;

use std::fs;
use std::path::PathBuf;

use common::{code, corpus_path, ssmach};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ssmach-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    let _ = fs::remove_file(&path);
    path
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_microservice_reports_two_open_lines() {
    let ms = corpus_path("microservice");
    let out = ssmach(&["check", path_str(&ms)]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let open: Vec<&str> = stdout.lines().filter(|l| l.split(' ').nth(1) == Some("open")).collect();
    assert_eq!(open.len(), 2, "{stdout}");
    assert!(stdout.lines().all(|l| l.starts_with("R4 open outside_responsibilities.")));

    assert_eq!(code(&ssmach(&["check", "--strict", path_str(&ms)])), 1);
}

#[test]
fn check_toy_strict_passes() {
    let out = ssmach(&["check", path_str(&corpus_path("toy")), "--strict"]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
}

#[test]
fn exit_codes_rank_errors_over_open() {
    let text = fs::read_to_string(corpus_path("microservice")).unwrap();
    // One dangling reference on top of the open cells.
    let broken = text.replacen("refs = [1]", "refs = [1, 9]", 1);
    let path = scratch("errors.ssmach");
    fs::write(&path, broken).unwrap();
    let out = ssmach(&["check", "--strict", path_str(&path)]);
    assert_eq!(code(&out), 2);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("R5 error inside_product_properties.product_knowledge:"), "{stdout}");
}

#[test]
fn parse_errors_exit_3_with_positions() {
    let path = scratch("bad.ssmach");
    fs::write(&path, "ssmach 1\n[cell inside_iface.roles]\n").unwrap();
    let out = ssmach(&["check", path_str(&path)]);
    assert_eq!(code(&out), 3);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains(":2:7: unknown-row:"), "{stderr}");

    let out = ssmach(&["fmt", "--write-in-place", path_str(&path)]);
    assert_eq!(code(&out), 3);
    assert_eq!(fs::read_to_string(&path).unwrap(), "ssmach 1\n[cell inside_iface.roles]\n");
}

#[test]
fn missing_file_and_bad_usage_exit_4() {
    assert_eq!(code(&ssmach(&["check", "/nonexistent/protocol.ssmach"])), 4);
    assert_eq!(code(&ssmach(&["render", path_str(&corpus_path("toy")), "--format", "pdf"])), 4);
    assert_eq!(code(&ssmach(&["frobnicate"])), 4);
    assert_eq!(code(&ssmach(&["explain", "R99"])), 4);
}

#[test]
fn fmt_writes_canonical_form_in_place() {
    let path = scratch("fmt.ssmach");
    fs::copy(corpus_path("toy"), &path).unwrap();
    let printed = ssmach(&["fmt", path_str(&path)]);
    assert_eq!(code(&printed), 0);
    assert_eq!(code(&ssmach(&["fmt", "--write-in-place", path_str(&path)])), 0);
    let written = fs::read(&path).unwrap();
    assert_eq!(written, printed.stdout);
    let again = ssmach(&["fmt", path_str(&path)]);
    assert_eq!(again.stdout, written);
}

#[test]
fn render_to_file_equals_stdout() {
    let out_path = scratch("ms.svg");
    let ms = corpus_path("microservice");
    for format in ["html", "svg"] {
        let stdout = ssmach(&["render", path_str(&ms), "--format", format]);
        assert_eq!(code(&stdout), 0);
        let status = ssmach(&["render", path_str(&ms), "--format", format, "--out-path", path_str(&out_path)]);
        assert_eq!(code(&status), 0);
        assert!(status.stdout.is_empty());
        assert_eq!(fs::read(&out_path).unwrap(), stdout.stdout);
    }
}

#[test]
fn diff_exit_reflects_changes() {
    let ms = corpus_path("microservice");
    let same = ssmach(&["diff", path_str(&ms), path_str(&ms)]);
    assert_eq!(code(&same), 0);
    assert_eq!(same.stdout, b"no changes\n");

    let text = fs::read_to_string(&ms).unwrap();
    let trimmed: String = text
        .lines()
        .filter(|l| !l.starts_with("1 = "))
        .map(|l| format!("{l}\n"))
        .collect();
    let new = scratch("no-item-1.ssmach");
    fs::write(&new, trimmed).unwrap();
    let out = ssmach(&["diff", path_str(&ms), path_str(&new)]);
    assert_eq!(code(&out), 2);
    let report = String::from_utf8(out.stdout).unwrap();
    let citing = text.matches("refs = [1]").count();
    assert_eq!(report.lines().filter(|l| l.starts_with("impact definition.1 -> ")).count(), citing);
    assert!(report.starts_with("definition 1 removed: "));
}

#[test]
fn init_writes_a_parseable_template_once() {
    let path = scratch("new.ssmach");
    assert_eq!(code(&ssmach(&["init", path_str(&path)])), 0);
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.matches("status = \"unset\"").count(), 60);
    for column in ["roles", "process_knowledge", "product_knowledge", "demanded_knowledge", "process_information"] {
        assert!(text.contains(&format!("#   {column}")), "{column}");
    }
    let check = ssmach(&["check", path_str(&path)]);
    assert_eq!(code(&check), 2);
    let stdout = String::from_utf8(check.stdout).unwrap();
    assert_eq!(stdout.lines().filter(|l| l.starts_with("R1 error")).count(), 60);
    // Refuses to overwrite.
    assert_eq!(code(&ssmach(&["init", path_str(&path)])), 4);
}

#[test]
fn explain_prints_rule_help() {
    let out = ssmach(&["explain", "R11"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("R11 "));
    assert!(text.contains("cycle"));
}

#[test]
fn serve_on_a_busy_port_exits_4() {
    let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = listener.local_addr().unwrap().port().to_string();
    let out = ssmach(&["serve", "--port", &port]);
    assert_eq!(code(&out), 4);
}
