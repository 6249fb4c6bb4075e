//! One line per acceptance criterion. Exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ssmach::diff::{diff, Impact};
use ssmach::dsl::{format, parse, serialize};
use ssmach::model::{
    derive_marks, AspectColumn, AspectRow, CellId, CellState, CellStatus, MetaInfo, Protocol,
    Relation, RelationKind, WorkPackages,
};
use ssmach::render::{plan, render_html, render_svg};
use ssmach::validator::{validate, Location, RuleId, Severity};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn load(name: &str) -> (String, Protocol) {
    let text = fs::read_to_string(common::corpus_path(name)).expect("corpus readable");
    let p = parse(&text).unwrap_or_else(|e| panic!("{name} does not parse: {e:?}"));
    (text, p)
}

fn cell_error_count(p: &Protocol) -> usize {
    validate(p).counts.error
}

fn microservice_corpus() -> Outcome {
    let started = Instant::now();
    let (text, _) = load("microservice");
    let p = parse(&text).map_err(|e| format!("{e:?}"))?;
    let report = validate(&p);
    let elapsed = started.elapsed();
    ensure!(report.counts.error == 0, "{} errors:\n{}", report.counts.error, report.render_lines());
    ensure!(report.counts.open == 2, "{} open findings", report.counts.open);
    ensure!(p.definition.len() == 4, "{} definition items", p.definition.len());
    for item in p.definition.keys() {
        let citing = CellId::all().filter(|c| p.cell(*c).refs.contains(item)).count();
        ensure!(citing > 0, "item {item} is not referenced");
    }
    ensure!(report.by_rule(RuleId::R6).count() == 0, "R6 findings");
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("0 errors, 2 open, 4 items all referenced, {elapsed:.2?}"))
}

fn toy_corpus() -> Outcome {
    let (_, p) = load("toy");
    let report = validate(&p);
    ensure!(report.counts.error == 0 && report.counts.open == 0, "{}", report.render_lines());
    let pi: Vec<&CellState> = AspectRow::ALL
        .iter()
        .map(|r| p.cell(CellId::new(*r, AspectColumn::ProcessInformation)))
        .filter(|c| c.status == CellStatus::Described)
        .collect();
    ensure!(pi.len() == 5, "{} described process_information cells", pi.len());
    ensure!(pi.iter().all(|c| c.refs.contains(&6)), "a process_information cell misses ref 6");
    let groups: BTreeSet<_> = pi.iter().map(|c| c.group.as_deref()).collect();
    ensure!(groups.len() == 1 && !groups.contains(&None), "groups {groups:?}");
    let source = CellId::new(AspectRow::InsideDependencies, AspectColumn::ProductKnowledge);
    for column in [AspectColumn::Roles, AspectColumn::ProcessKnowledge] {
        let r = Relation::provides(source, CellId::new(AspectRow::InsideDependencies, column));
        ensure!(p.relations.contains(&r), "missing {r}");
    }
    Ok("0 errors, 0 open, five process_information cells share one group citing item 6".into())
}

fn denial_propagation() -> Outcome {
    let (_, p) = load("microservice");
    let inside = [
        AspectRow::InsideProductProperties,
        AspectRow::InsideInterfaces,
        AspectRow::InsideDependencies,
        AspectRow::InsideResponsibilities,
    ];
    let mut edges = Vec::new();
    for row in inside {
        let pk = CellId::new(row, AspectColumn::ProductKnowledge);
        ensure!(p.status(pk) == CellStatus::Denied, "{pk} is not denied");
        for column in AspectColumn::ALL.iter().filter(|c| **c != AspectColumn::ProductKnowledge) {
            let id = CellId::new(row, *column);
            ensure!(p.status(id) == CellStatus::Provided, "{id} is not provided");
            let edge = Relation::provides(pk, id);
            ensure!(p.relations.contains(&edge), "missing {edge}");
            edges.push(edge);
        }
    }
    let before = cell_error_count(&p);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut misses = 0;
    for _ in 0..1000 {
        let edge = *edges.choose(&mut rng).unwrap();
        let mut q = p.clone();
        q.relations.retain(|r| *r != edge);
        if cell_error_count(&q) != before + 1 {
            misses += 1;
        }
    }
    ensure!(misses == 0, "{misses} of 1000 deletions did not add exactly one error");
    Ok(format!("{} inside-row provides edges, 1000 random deletions, 0 false negatives", edges.len()))
}

const ALPHABET: &[&str] = &[
    "a", "b", "z", " ", " ", "\"", "\\", "\n", "\t", "\r", "#", "[", "]", "=", "ß", "é", "→", "🙂",
    "\"\"\"", "\n\"\"\"\n", "1", ",",
];

fn random_text(rng: &mut ChaCha8Rng) -> String {
    let len = rng.gen_range(0..24);
    (0..len).map(|_| *ALPHABET.choose(rng).unwrap()).collect()
}

fn random_ident(rng: &mut ChaCha8Rng) -> String {
    let len = rng.gen_range(0..6);
    let mut s = String::from(*["g", "team", "x"].choose(rng).unwrap());
    for _ in 0..len {
        s.push(*b"abc019-_".choose(rng).unwrap() as char);
    }
    s
}

fn random_cell(rng: &mut ChaCha8Rng) -> CellId {
    CellId::from_index(rng.gen_range(0..CellId::COUNT)).unwrap()
}

fn random_protocol(rng: &mut ChaCha8Rng) -> Protocol {
    let mut meta = MetaInfo {
        name: random_text(rng),
        version: random_text(rng),
        date: None,
        filler: random_text(rng),
        our_team: random_text(rng),
        cooperating_teams: random_text(rng),
        externals: random_text(rng),
    };
    if rng.gen_bool(0.7) {
        let (y, m, d) = (rng.gen_range(1980..2100), rng.gen_range(1..13), rng.gen_range(1..29));
        meta.date = format!("{y:04}-{m:02}-{d:02}").parse().ok();
    }
    let mut p = Protocol::new(
        meta,
        WorkPackages {
            development: rng.gen(),
            maintenance: rng.gen(),
            improvement: rng.gen(),
        },
    );
    for _ in 0..rng.gen_range(0..8) {
        p.definition.insert(rng.gen_range(1..20), random_text(rng));
    }
    for _ in 0..rng.gen_range(0..4) {
        p.groups.insert(random_ident(rng), random_text(rng));
    }
    for _ in 0..rng.gen_range(0..50) {
        let state = CellState {
            status: *CellStatus::ALL.choose(rng).unwrap(),
            text: rng.gen_bool(0.5).then(|| random_text(rng)),
            group: rng.gen_bool(0.3).then(|| random_ident(rng)),
            refs: (0..rng.gen_range(0..4)).map(|_| rng.gen_range(1..25)).collect(),
        };
        p.cells.insert(random_cell(rng), state);
    }
    for _ in 0..rng.gen_range(0..25) {
        let (s, t) = (random_cell(rng), random_cell(rng));
        if s != t {
            let kind = *RelationKind::ALL.choose(rng).unwrap();
            p.relations.push(Relation { kind, source: s, target: t });
        }
    }
    p.fill_defaults()
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for i in 0..1000 {
        let p = random_protocol(&mut rng);
        let text = serialize(&p);
        match parse(&text) {
            Ok(back) if back == p => {}
            Ok(_) => return Err(format!("protocol {i} changed in the round trip:\n{text}")),
            Err(e) => return Err(format!("protocol {i} did not parse: {e:?}\n{text}")),
        }
    }
    for name in ["microservice", "toy"] {
        let (text, _) = load(name);
        let once = format(&text).map_err(|e| format!("{e:?}"))?;
        ensure!(format(&once).as_ref() == Ok(&once), "format not idempotent on {name}");
    }
    Ok("1000 generated protocols round-trip; format idempotent on both corpora".into())
}

/// Cells on some provides cycle, by walking every simple path.
fn brute_force_cycle_cells(p: &Protocol) -> BTreeSet<CellId> {
    let edges: Vec<(CellId, CellId)> = p
        .relations_of(RelationKind::Provides)
        .map(|r| (r.source, r.target))
        .collect();
    let mut found = BTreeSet::new();
    fn walk(start: CellId, path: &mut Vec<CellId>, edges: &[(CellId, CellId)], found: &mut BTreeSet<CellId>) {
        let at = *path.last().unwrap();
        for &(s, t) in edges {
            if s != at {
                continue;
            }
            if t == start {
                found.extend(path.iter().copied());
            } else if !path.contains(&t) {
                path.push(t);
                walk(start, path, edges, found);
                path.pop();
            }
        }
    }
    let starts: BTreeSet<CellId> = edges.iter().map(|e| e.0).collect();
    for s in starts {
        walk(s, &mut vec![s], &edges, &mut found);
    }
    found
}

fn cycle_detection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut planted = [0usize; 2];
    for i in 0..1000 {
        let mut p = random_protocol(&mut rng);
        // Keep random provides edges sparse so path enumeration stays cheap.
        p.relations.truncate(12);
        let len = if i % 2 == 0 { 2 } else { 3 };
        let mut ring: Vec<CellId> = Vec::new();
        while ring.len() < len {
            let c = random_cell(&mut rng);
            if !ring.contains(&c) {
                ring.push(c);
            }
        }
        for k in 0..len {
            p.relations.push(Relation::provides(ring[k], ring[(k + 1) % len]));
        }
        p = p.fill_defaults();
        planted[len - 2] += 1;
        let reported: BTreeSet<CellId> = validate(&p)
            .by_rule(RuleId::R11)
            .filter(|d| d.severity == Severity::Error)
            .filter_map(|d| match d.location {
                Location::Cell(c) => Some(c),
                _ => None,
            })
            .collect();
        ensure!(ring.iter().all(|c| reported.contains(c)), "planted cycle {ring:?} missed");
        let oracle = brute_force_cycle_cells(&p);
        ensure!(reported == oracle, "R11 {reported:?} vs brute force {oracle:?}");
    }
    Ok(format!(
        "{} planted 2-cycles and {} 3-cycles reported; R11 equals brute-force enumeration",
        planted[0], planted[1]
    ))
}

fn diff_impact() -> Outcome {
    let (_, old) = load("microservice");
    let mut new = old.clone();
    new.definition.remove(&1);
    let d = diff(&old, &new);
    let mut oracle = BTreeSet::new();
    for id in CellId::all() {
        if old.cell(id).refs.contains(&1) {
            oracle.insert(Impact { item: 1, cell: id });
        }
    }
    let got: BTreeSet<Impact> = d.impact.iter().copied().collect();
    ensure!(got.len() == d.impact.len() && got == oracle, "impact {:?} vs {oracle:?}", d.impact);
    for name in ["microservice", "toy"] {
        let (_, p) = load(name);
        ensure!(diff(&p, &p).is_empty(), "diff({name}, {name}) not empty");
    }
    Ok(format!("{} impact entries equal the ref scan; self-diffs empty", oracle.len()))
}

fn render_determinism() -> Outcome {
    let mut details = Vec::new();
    for name in ["microservice", "toy"] {
        let (_, p) = load(name);
        let render = || {
            let plan = plan(&p, &derive_marks(&p));
            (render_html(&plan), render_svg(&plan))
        };
        let (html, svg) = render();
        ensure!((html.clone(), svg.clone()) == render(), "{name}: renders differ");
        let open_cells = html.matches(" data-status=\"open\"").count();
        let open = validate(&p).counts.open;
        ensure!(open_cells == open, "{name}: {open_cells} open cells vs {open} open findings");
        let markers = svg.matches(" marker-end=\"url(#").count();
        ensure!(markers == p.relations.len(), "{name}: {markers} markers vs {} relations", p.relations.len());
        details.push(format!("{name} {open_cells} open/{markers} markers"));
    }
    Ok(details.join(", "))
}

fn cli_service_parity() -> Outcome {
    let server = common::Server::start();
    let mut checked = 0;
    let mut compare = |what: String, cli: &[&str], response: common::Response| -> Result<(), String> {
        let out = common::ssmach(cli);
        ensure!(out.stdout == response.body, "{what}: CLI output differs from service body");
        checked += 1;
        Ok(())
    };
    let ms = common::corpus_path("microservice");
    let toy = common::corpus_path("toy");
    for path in [&ms, &toy] {
        let p = path.to_str().unwrap();
        let text = fs::read_to_string(path).unwrap();
        compare(format!("parse {p}"), &["parse", p], server.post("/parse", &text))?;
        compare(format!("check {p}"), &["check", "--json", p], server.post("/validate?strict=false", &text))?;
        compare(
            format!("check --strict {p}"),
            &["check", "--json", "--strict", p],
            server.post("/validate?strict=true", &text),
        )?;
        for format in ["html", "svg"] {
            compare(
                format!("render {format} {p}"),
                &["render", p, "--format", format],
                server.post(&format!("/render?format={format}"), &text),
            )?;
        }
        for other in [&ms, &toy] {
            let o = other.to_str().unwrap();
            let body = serde_json::json!({"old": text, "new": fs::read_to_string(other).unwrap()}).to_string();
            compare(
                format!("diff {p} {o}"),
                &["diff", "--json", p, o],
                server.request("POST", "/diff", "application/json", body.as_bytes()),
            )?;
        }
    }
    compare("schema".into(), &["schema"], server.get("/schema"))?;
    let health = server.get("/health");
    ensure!(health.body == ssmach::api::health().body.as_bytes(), "health body differs");
    Ok(format!("{checked} endpoint/CLI pairs byte-identical; /health matches its fixed body"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("corpus reproduction (microservice)", microservice_corpus),
        ("corpus reproduction (toy)", toy_corpus),
        ("denial propagation", denial_propagation),
        ("round trip", round_trip),
        ("cycle detection", cycle_detection),
        ("diff impact", diff_impact),
        ("render determinism", render_determinism),
        ("CLI/service parity", cli_service_parity),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
