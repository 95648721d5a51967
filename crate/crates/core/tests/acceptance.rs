//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p rp2-core --test acceptance`. Set `RP2_BLESS=1` to
//! rewrite the golden files instead of comparing against them.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rp2_core::fuzz::{self, random_diagram, random_tuple, FuzzConfig};
use rp2_core::geometry::{segment_intersection, SegmentIntersection};
use rp2_core::{
    apply_edit_reported, apply_move, classify, enumerate_classes, equiv, from_json, invariants, random_edit_of_kind,
    random_move, random_move_of_kind, realize, signed_index, to_json, BouquetDiagram, EditKind, InvariantTuple,
    MoveKind, Orientation,
};

/// Wall-clock budget for the 1000-trial campaign.
const FUZZ_BUDGET: Duration = Duration::from_secs(120);

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn fuzz_invariance() -> Outcome {
    let start = Instant::now();
    let report = fuzz::run(&FuzzConfig { seed: 1, steps: 20, trials: 1000, max_loops: 3, threads: 0 });
    let elapsed = start.elapsed();
    if let Some(f) = report.failures.first() {
        return Err(format!("{} of 1000 trials failed; first: {f}", report.failures.len()));
    }
    ensure(report.moves_applied == 20_000, || format!("only {} moves applied", report.moves_applied))?;
    ensure(elapsed < FUZZ_BUDGET, || format!("took {elapsed:.1?}, budget {FUZZ_BUDGET:?}"))?;
    Ok(format!("1000/1000 trials, 20000 moves, budget {FUZZ_BUDGET:?}"))
}

fn indices(d: &BouquetDiagram, or: Orientation) -> Result<Vec<i64>, String> {
    (0..d.n()).map(|i| signed_index(d, i, or).map_err(err)).collect()
}

fn detour_arithmetic() -> Outcome {
    let mut seen = [0usize; 2];
    for seed in 0..100u64 {
        let d = random_diagram(seed, 3, 2).map_err(err)?;
        let m = random_move_of_kind(&d, MoveKind::Detour, seed).map_err(err)?;
        let sigma: i64 = if m.params[2] > num_traits::Zero::zero() { 1 } else { -1 };
        let out = apply_move(&d, &m).map_err(err)?;
        let i = m.target.loop_idx;
        for (or, s) in [(Orientation::Positive, 1), (Orientation::Negative, -1)] {
            let (a, b) = (indices(&d, or)?, indices(&out, or)?);
            for k in 0..d.n() {
                let want = if k == i { 2 * sigma * s } else { 0 };
                ensure(b[k] - a[k] == want, || format!("seed {seed}: {m}: loop {k} index {} -> {}", a[k], b[k]))?;
            }
        }
        ensure(invariants(&out).map_err(err)? == invariants(&d).map_err(err)?, || {
            format!("seed {seed}: tuple changed")
        })?;
        seen[usize::from(sigma > 0)] += 1;
    }
    Ok(format!("100/100 detours, {} with sign +1 and {} with sign -1", seen[1], seen[0]))
}

fn flipped(a: &[bool], b: &[bool]) -> Vec<usize> {
    (0..a.len()).filter(|&k| a[k] != b[k]).collect()
}

fn negative_controls() -> Outcome {
    let mut parity_changes = 0;
    for seed in 0..200u64 {
        let d = random_diagram(seed, 3, 1).map_err(err)?;
        let before = invariants(&d).map_err(err)?;

        let e = random_edit_of_kind(&d, EditKind::SingleKink, seed).map_err(err)?;
        let after = invariants(&apply_edit_reported(&d, &e).map_err(err)?.0).map_err(err)?;
        let i = e.target.loop_idx;
        ensure(flipped(&before.w, &after.w) == [i], || format!("seed {seed}: {e}: w {before} -> {after}"))?;
        ensure(before.order == after.order && before.h == after.h, || {
            format!("seed {seed}: {e}: {before} -> {after}")
        })?;

        let e = random_edit_of_kind(&d, EditKind::SeamReroute, seed).map_err(err)?;
        let (out, report) = apply_edit_reported(&d, &e).map_err(err)?;
        let after = invariants(&out).map_err(err)?;
        let i = e.target.loop_idx;
        ensure(flipped(&before.h, &after.h) == [i], || format!("seed {seed}: {e}: h {before} -> {after}"))?;
        ensure(before.order == after.order, || format!("seed {seed}: {e}: order changed"))?;
        let want: Vec<usize> = if report.parity_changed() { vec![i] } else { vec![] };
        ensure(flipped(&before.w, &after.w) == want, || format!("seed {seed}: {e}: w does not match report"))?;
        parity_changes += usize::from(report.parity_changed());
    }
    Ok(format!("200 SingleKink and 200 SeamReroute edits; {parity_changes} reroutes reported a parity change"))
}

/// Canonical cyclic words by brute force over all words, as rank sequences
/// (`e_i` has rank `2i`, its inverse `2i + 1`), minimized over rotations and
/// reversals.
fn brute_force_words(n: usize) -> BTreeSet<Vec<usize>> {
    fn permutations(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
        }
        for k in 0..rest.len() {
            let x = rest.remove(k);
            cur.push(x);
            permutations(rest, cur, out);
            cur.pop();
            rest.insert(k, x);
        }
    }
    let mut all = Vec::new();
    permutations(&mut (0..2 * n).collect(), &mut Vec::new(), &mut all);
    all.into_iter()
        .map(|w| {
            let mut best = w.clone();
            for mut v in [w.clone(), w.iter().rev().copied().collect::<Vec<_>>()] {
                for _ in 0..v.len() {
                    v.rotate_left(1);
                    best = best.min(v.clone());
                }
            }
            best
        })
        .collect()
}

fn ranks(t: &InvariantTuple) -> Vec<usize> {
    t.order.symbols().iter().map(|s| s.rank()).collect()
}

fn completeness() -> Outcome {
    let mut counts = Vec::new();
    for (n, expected) in [(1, 4usize), (2, 48), (3, 3840)] {
        let tuples: Vec<InvariantTuple> = enumerate_classes(n).map_err(err)?.collect();
        let distinct: BTreeSet<String> = tuples.iter().map(|t| t.to_string()).collect();
        ensure(distinct.len() == tuples.len(), || format!("n={n}: duplicate tuples"))?;
        ensure(tuples.len() == expected, || format!("n={n}: {} tuples, expected {expected}", tuples.len()))?;
        let words: BTreeSet<Vec<usize>> = tuples.iter().map(ranks).collect();
        ensure(words == brute_force_words(n), || format!("n={n}: words differ from brute force"))?;
        ensure(tuples.len() == words.len() << (2 * n), || format!("n={n}: not a full product"))?;
        counts.push(tuples.len());
        if n <= 2 {
            for t in &tuples {
                let d = realize(t).map_err(err)?;
                ensure(classify(&d).map_err(err)? == *t, || format!("round trip failed for {t}"))?;
            }
        }
    }
    for seed in 0..150u64 {
        let t = random_tuple(3, seed).map_err(err)?;
        let d = realize(&t).map_err(err)?;
        ensure(classify(&d).map_err(err)? == t, || format!("round trip failed for {t}"))?;
    }
    Ok(format!("counts {counts:?}; round trip 52/52 for n<=2 and 150/150 random n=3"))
}

/// Self-crossings of loop `i` by brute force over all segment pairs.
fn raw_self_crossings(d: &BouquetDiagram, i: usize) -> usize {
    let segs: Vec<_> = d.segment_ids().filter(|s| s.loop_idx == i).map(|s| d.segment(s).unwrap()).collect();
    let mut count = 0;
    for a in 0..segs.len() {
        for b in a + 1..segs.len() {
            if let SegmentIntersection::Proper { .. } = segment_intersection(segs[a], segs[b]) {
                count += 1;
            }
        }
    }
    count
}

fn orientation_independence() -> Outcome {
    let mut odd = 0;
    for seed in 0..500u64 {
        let d = random_diagram(seed, 3, (seed % 6) as usize).map_err(err)?;
        let w = invariants(&d).map_err(err)?.w;
        let (pos, neg) = (indices(&d, Orientation::Positive)?, indices(&d, Orientation::Negative)?);
        for i in 0..d.n() {
            ensure(pos[i] == -neg[i], || format!("seed {seed} loop {i}: {} vs {}", pos[i], neg[i]))?;
            ensure(pos[i].rem_euclid(2) == neg[i].rem_euclid(2), || format!("seed {seed} loop {i}: parity"))?;
            let raw = raw_self_crossings(&d, i) % 2 == 1;
            ensure(w[i] == raw, || format!("seed {seed} loop {i}: inv3 {} but raw parity {raw}", w[i]))?;
            ensure((pos[i].rem_euclid(2) == 1) == raw, || format!("seed {seed} loop {i}: index parity"))?;
            odd += usize::from(raw);
        }
    }
    Ok(format!("500 diagrams, {odd} loops with odd self-crossing count"))
}

fn decision_consistency() -> Outcome {
    let mut equal_pairs = 0;
    for seed in 0..100u64 {
        let n = 1 + (seed % 3) as usize;
        let t1 = random_tuple(n, 2 * seed).map_err(err)?;
        let t2 = if seed % 2 == 0 { t1.clone() } else { random_tuple(n, 2 * seed + 1).map_err(err)? };
        let mut d2 = realize(&t2).map_err(err)?;
        for k in 0..3 {
            let m = random_move(&d2, seed * 7 + k).map_err(err)?;
            d2 = apply_move(&d2, &m).map_err(err)?;
        }
        let same = equiv(&realize(&t1).map_err(err)?, &d2).map_err(err)?;
        ensure(same == (t1 == t2), || format!("seed {seed}: equiv {same} for {t1} vs {t2}"))?;
        equal_pairs += usize::from(t1 == t2);
    }
    for seed in 0..100u64 {
        let d = random_diagram(seed + 1000, 3, 0).map_err(err)?;
        let moved = random_diagram_from(&d, seed)?;
        ensure(equiv(&d, &moved).map_err(err)?, || format!("seed {seed}: moves changed the class"))?;
    }
    Ok(format!("100 tuple pairs ({equal_pairs} equal), 100 move pairs"))
}

fn random_diagram_from(d: &BouquetDiagram, seed: u64) -> Result<BouquetDiagram, String> {
    let mut d = d.clone();
    for k in 0..5 {
        let m = random_move(&d, seed * 31 + k).map_err(err)?;
        d = apply_move(&d, &m).map_err(err)?;
    }
    Ok(d)
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn golden_outputs() -> Result<Vec<(&'static str, String)>, String> {
    let list =
        |n| -> Result<String, String> { Ok(enumerate_classes(n).map_err(err)?.map(|t| format!("{t}\n")).collect()) };
    let mut realized = String::new();
    let mut tuples: Vec<InvariantTuple> = enumerate_classes(1).map_err(err)?.collect();
    tuples.extend(
        ["order=e1,e2,e1^-1,e2^-1; h=10; w=01", "order=e1,e2^-1,e3,e1^-1,e2,e3^-1; h=101; w=110"]
            .iter()
            .map(|s| s.parse::<InvariantTuple>().unwrap()),
    );
    for t in &tuples {
        let d = realize(t).map_err(err)?;
        let json = to_json(&d);
        ensure(to_json(&from_json(&json).map_err(err)?) == json, || format!("JSON round trip for {t}"))?;
        realized.push_str(&format!("{t}\n{json}\n"));
    }
    let mut trial = String::new();
    let outcome = fuzz::run_trial(7, 0, 5, 2);
    trial.push_str(&rp2_core::format_script(&outcome.script));
    Ok(vec![
        ("enumerate_1.txt", list(1)?),
        ("enumerate_2.txt", list(2)?),
        ("realize.txt", realized),
        ("fuzz_trial.txt", trial),
    ])
}

fn exactness() -> Outcome {
    let first = golden_outputs()?;
    ensure(first == golden_outputs()?, || "outputs differ between two runs".into())?;
    let dir = golden_dir();
    if std::env::var_os("RP2_BLESS").is_some() {
        std::fs::create_dir_all(&dir).map_err(err)?;
        for (name, text) in &first {
            std::fs::write(dir.join(name), text).map_err(err)?;
        }
        return Ok(format!("blessed {} golden files", first.len()));
    }
    let mut bytes = 0;
    for (name, text) in &first {
        let want = std::fs::read_to_string(dir.join(name)).map_err(|e| format!("{name}: {e}"))?;
        ensure(want == *text, || format!("{name} differs from the golden file"))?;
        bytes += text.len();
    }
    Ok(format!("{} golden files, {bytes} bytes identical", first.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 7] = [
        ("fuzz invariance", fuzz_invariance),
        ("detour arithmetic", detour_arithmetic),
        ("negative controls", negative_controls),
        ("completeness", completeness),
        ("orientation independence", orientation_independence),
        ("decision consistency", decision_consistency),
        ("exactness", exactness),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("PASS [{}] {name}: {detail} ({:.1?})", k + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
