//! Helpers shared by the integration tests: reference implementations that
//! avoid the library's own algorithms, and seeded random generators.
#![allow(dead_code)]

pub mod kripke;
pub mod random;

use std::path::PathBuf;
use std::sync::Arc;

use eplan_core::planner::{goal_satisfied, Problem};
use eplan_core::{apply, parse_domain, Domain, EState, EStateBuilder, Signature};

pub const BENCHMARKS: [&str; 5] = [
    "coin_in_the_box",
    "selective_communication",
    "grapevine",
    "collaboration_communication",
    "assembly_line",
];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.eplan"))
}

pub fn load_fixture(name: &str) -> Domain {
    let path = fixture_path(name);
    let src = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_domain(&src).unwrap_or_else(|e| panic!("{}:{e}", path.display()))
}

pub fn all_fixtures() -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| {
            let p = e.unwrap().path();
            (p.extension()? == "eplan")
                .then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names
}

/// The four-world state of the running example: `w = {f,g,h}`,
/// `w' = {g,h}`, `v = {f,h}`, `v' = {h}`. A and B cannot tell `w` from `w'`;
/// C believes the actual world is `v` or `v'`; in `v`, `v'` everyone
/// considers only `v`, `v'`. Returns the state and `[w, w', v, v']`.
pub fn figure_one() -> (EState, [usize; 4]) {
    let sig = Arc::new(Signature::new(
        vec!["f".into(), "g".into(), "h".into()],
        vec!["A".into(), "B".into(), "C".into()],
    ));
    let (a, b, c) = (
        sig.agent("A").unwrap(),
        sig.agent("B").unwrap(),
        sig.agent("C").unwrap(),
    );
    let mut builder = EStateBuilder::new(sig);
    let w = builder.add_named_world(&["f", "g", "h"]);
    let w2 = builder.add_named_world(&["g", "h"]);
    let v = builder.add_named_world(&["f", "h"]);
    let v2 = builder.add_named_world(&["h"]);
    for from in [w, w2] {
        for to in [w, w2] {
            builder.add_edge(from, a, to);
            builder.add_edge(from, b, to);
        }
        for to in [v, v2] {
            builder.add_edge(from, c, to);
        }
    }
    for from in [v, v2] {
        for to in [v, v2] {
            for ag in [a, b, c] {
                builder.add_edge(from, ag, to);
            }
        }
    }
    (builder.build(w).unwrap(), [w, w2, v, v2])
}

/// Length of a shortest plan found by trying every action sequence of
/// length 0, 1, ... up to `max_depth`, with no duplicate detection.
pub fn exhaustive_optimum(problem: &Problem, max_depth: usize) -> Option<usize> {
    fn dfs(problem: &Problem, s: &EState, remaining: usize) -> bool {
        if remaining == 0 {
            return goal_satisfied(s, &problem.goal);
        }
        problem
            .actions
            .iter()
            .any(|a| match apply(s, a).expect("transition error") {
                Some(next) => dfs(problem, &next, remaining - 1),
                None => false,
            })
    }
    (0..=max_depth).find(|&len| dfs(problem, &problem.initial, len))
}
