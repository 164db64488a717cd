//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any fails.

use std::collections::BTreeSet;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use parsec::compressor::Scratch;
use parsec::evolution::{evolve_with_observer, BoundsPreset, Evaluator, FitnessReport, FitnessWeights};
use parsec::sentiment::{self, Lexicon};
use parsec::synthetic::{synthetic_lexicon, synthetic_lexicon_text, SyntheticCorpus};
use parsec::{
    apply_compressor, apply_rule, compression_rate, write_tagged_corpus, Compressor, Corpus, EvolutionParams,
    NegationList, PosTag, Rational64, Rule, TaggedSentence,
};
use parsec_cli::report::{percent, render_table, AVERAGE};
use parsec_cli::{commands, evaluate, evolve, ExperimentConfig, Split};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WORD_TAGS: [PosTag; 6] = [PosTag::DT, PosTag::JJ, PosTag::NN, PosTag::RB, PosTag::VB, PosTag::IN];
const PUNCT_TAGS: [PosTag; 2] = [PosTag::Period, PosTag::Comma];
const DATA_TAGS: [PosTag; 8] =
    [PosTag::DT, PosTag::JJ, PosTag::NN, PosTag::RB, PosTag::VB, PosTag::IN, PosTag::Period, PosTag::Comma];

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn random_rule(rng: &mut ChaCha8Rng, max_len: usize) -> Rule {
    let len = rng.random_range(1..=max_len);
    let tags = (0..len)
        .map(|i| {
            if i > 0 && i + 1 < len && rng.random_bool(0.2) {
                PosTag::Wildcard
            } else {
                *WORD_TAGS.choose(rng).unwrap()
            }
        })
        .collect();
    let mut decisions: Vec<usize> = (0..len).filter(|_| rng.random_bool(0.5)).collect();
    if decisions.is_empty() {
        decisions.push(rng.random_range(0..len));
    }
    Rule::new(tags, decisions).unwrap()
}

fn random_sentence(rng: &mut ChaCha8Rng, max_len: usize) -> TaggedSentence {
    let len = rng.random_range(1..=max_len);
    let tags: Vec<PosTag> = (0..len).map(|_| *DATA_TAGS.choose(rng).unwrap()).collect();
    let words = (0..len).map(|i| format!("w{i}")).collect();
    TaggedSentence::new(words, tags).unwrap()
}

/// Surviving positions: every window checked directly against the pattern.
fn brute_force_keep(rule: &Rule, tags: &[PosTag]) -> Vec<usize> {
    let p = rule.tags();
    let mut deleted = BTreeSet::new();
    for s in 0..tags.len() {
        if s + p.len() > tags.len() {
            break;
        }
        let hit = (0..p.len()).all(|i| {
            let t = tags[s + i];
            !PUNCT_TAGS.contains(&t) && (p[i] == PosTag::Wildcard || p[i] == t)
        });
        if hit {
            for d in rule.decisions() {
                deleted.insert(s + d);
            }
        }
    }
    (0..tags.len()).filter(|i| !deleted.contains(i)).collect()
}

fn matcher_oracle() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut agree, mut with_match) = (0, 0);
    let cases = 10_000;
    for _ in 0..cases {
        let rule = random_rule(&mut rng, 4);
        let s = random_sentence(&mut rng, 10);
        let keep = brute_force_keep(&rule, s.tags());
        let out = apply_rule(&rule, &s);
        let words: Vec<&String> = keep.iter().map(|&i| &s.words()[i]).collect();
        let tags: Vec<PosTag> = keep.iter().map(|&i| s.tags()[i]).collect();
        if out.words().iter().collect::<Vec<_>>() == words && out.tags() == tags {
            agree += 1;
        }
        with_match += (keep.len() < s.len()) as usize;
    }
    let elapsed = start.elapsed();
    let detail = format!("{agree}/{cases} agree, {with_match} with deletions, {elapsed:.2?}");
    if agree == cases && elapsed < Duration::from_secs(5) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn punctuation_conservation() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut checked, mut lost, mut deleted_words) = (0, 0, 0);
    for _ in 0..1_000 {
        let n_rules = rng.random_range(1..=8);
        let c = Compressor::new((0..n_rules).map(|_| random_rule(&mut rng, 5)).collect()).unwrap();
        for _ in 0..100 {
            let s = random_sentence(&mut rng, 20);
            let out = apply_compressor(&c, &s);
            let punct = |x: &TaggedSentence| -> Vec<(String, PosTag)> {
                x.words()
                    .iter()
                    .zip(x.tags())
                    .filter(|(_, t)| t.is_punctuation())
                    .map(|(w, t)| (w.clone(), *t))
                    .collect()
            };
            if punct(&out) != punct(&s) {
                lost += 1;
            }
            deleted_words += s.len() - out.len();
            checked += 1;
        }
    }
    let detail = format!("{checked} compressions, {lost} lost punctuation, {deleted_words} words deleted");
    if lost == 0 && deleted_words > 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

const SCORING_VOCAB: [&str; 12] =
    ["great", "Great", "awful", "fine", "not", "NOT", "never", "n't", "without", "movie", "the", "x"];

/// The scoring loop written out directly, with its own lexicon table.
fn transcribed_score(words: &[&str]) -> f64 {
    let value = |w: &str| match w {
        "great" => Some(2.0),
        "awful" => Some(-3.0),
        "fine" => Some(0.5),
        _ => None,
    };
    let negation = |w: &str| ["not", "no", "never", "cannot", "n't", "without"].contains(&w);
    let mut score = 0.0;
    let mut negated = false;
    for w in words {
        let w = w.to_lowercase();
        if let Some(v) = value(&w) {
            if negated {
                score += -v;
            } else {
                score += v;
            }
            negated = false;
        } else if negation(&w) {
            negated = !negated;
        } else {
            negated = false;
        }
    }
    score
}

fn scoring_oracle() -> Verdict {
    let lexicon = Lexicon::new([("great", 2.0), ("awful", -3.0), ("fine", 0.5)]).unwrap();
    let negations = NegationList::default();
    let score = |w: &[&str]| sentiment::score_sentence(w, &lexicon, &negations);
    let worked =
        [(vec!["not", "great"], -2.0), (vec!["not", "not", "great"], 2.0), (vec!["not", "x", "great"], 2.0)];
    for (words, expected) in &worked {
        let got = score(words);
        if got != *expected || transcribed_score(words) != *expected {
            return Err(format!("{words:?} scored {got}, expected {expected}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..1_000 {
        let len = rng.random_range(0..16);
        let words: Vec<&str> = (0..len).map(|_| *SCORING_VOCAB.choose(&mut rng).unwrap()).collect();
        let (a, b) = (score(&words), transcribed_score(&words));
        if a != b {
            return Err(format!("sequence {i} {words:?}: {a} != {b}"));
        }
    }
    Ok("3 worked cases and 1000 random sequences exact".into())
}

fn fitness_formula() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let wf = FitnessWeights::<f64>::default();
    let wr = FitnessWeights::<Rational64>::default();
    for i in 0..1_000 {
        let raw: i64 = rng.random_range(-1000..=1000);
        let n: i64 = rng.random_range(1..=2000);
        let removed: i64 = rng.random_range(0..=n * 30);
        let rules: usize = rng.random_range(1..=500);
        let avg = removed as f64 / n as f64;
        let f = FitnessReport::new(raw, avg, rules, 0.0, &wf);
        if f.total != raw as f64 + 0.5 * avg - 0.1 * rules as f64 {
            return Err(format!("f64 case {i}: {f:?}"));
        }
        let avg_r = Rational64::new(removed, n);
        let r = FitnessReport::new(raw, avg_r, rules, 0.0, &wr);
        let expected =
            Rational64::from_integer(raw) + Rational64::new(1, 2) * avg_r - Rational64::new(rules as i64, 10);
        if r.total != expected {
            return Err(format!("exact case {i}: {} != {}", r.total, expected));
        }
    }
    // UH never occurs in the synthetic corpus, so these rules never fire.
    let corpus = SyntheticCorpus::new("id", 50, 4).generate();
    let af = parsec::sentiment::BaselineAnalyzer::new(synthetic_lexicon::<f64>(), NegationList::default())
        .unwrap();
    let ar =
        parsec::sentiment::BaselineAnalyzer::new(synthetic_lexicon::<Rational64>(), NegationList::default())
            .unwrap();
    let ef = Evaluator::new(&corpus, &af, wf);
    let er = Evaluator::new(&corpus, &ar, wr);
    for k in 1..=20usize {
        let c = Compressor::new(vec![Rule::new(vec![PosTag::UH, PosTag::UH], vec![0]).unwrap(); k]).unwrap();
        let tf = ef.fitness(&c, &mut Scratch::default()).total;
        let tr = er.fitness(&c, &mut Scratch::default()).total;
        if tf != -0.1 * k as f64 || tr != Rational64::new(-(k as i64), 10) {
            return Err(format!("identity compressor with {k} rules: {tf} / {tr}"));
        }
    }
    Ok("1000 reports exact in f64 and rationals; identity totals -0.1 per rule".into())
}

fn bound_satisfaction() -> Verdict {
    let start = Instant::now();
    let corpus = SyntheticCorpus::new("bounds", 200, 5).generate();
    let analyzer = parsec::BaselineAnalyzer::new(synthetic_lexicon(), NegationList::default()).unwrap();
    let mut details = Vec::new();
    for preset in [BoundsPreset::TABLE[0], BoundsPreset::TABLE[2]] {
        let p = EvolutionParams {
            population_size: 50,
            generations: 20,
            seed: 5,
            ..EvolutionParams::with_bounds(preset)
        };
        let (mut checked, mut bad, mut gens) = (0, 0, 0);
        evolve_with_observer(&p, &corpus, &analyzer, |_, pop| {
            gens += 1;
            for ind in pop {
                let rate = compression_rate(&ind.compressor, &corpus);
                let n = ind.compressor.num_rules();
                if !(p.lcb..=p.ucb).contains(&rate) || !(p.rules_min..=p.rules_max).contains(&n) {
                    bad += 1;
                }
                checked += 1;
            }
        })
        .map_err(|e| e.to_string())?;
        details.push(format!("[{}, {}]: {bad}/{checked} violations over {gens} populations", p.lcb, p.ucb));
        if bad > 0 || gens != 21 {
            return Err(details.join("; "));
        }
    }
    let elapsed = start.elapsed();
    details.push(format!("{elapsed:.1?}"));
    if elapsed < Duration::from_secs(120) {
        Ok(details.join("; "))
    } else {
        Err(details.join("; "))
    }
}

struct Workspace {
    _dir: tempfile::TempDir,
    root: PathBuf,
}

impl Workspace {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        fs::write(root.join("lexicon.txt"), synthetic_lexicon_text()).unwrap();
        Workspace { _dir: dir, root }
    }

    fn corpus(&self, name: &str, instances: usize, seed: u64) -> PathBuf {
        let corpus: Corpus = SyntheticCorpus::new(name, instances, seed).generate();
        let path = self.root.join(format!("{name}.txt"));
        let mut buf = Vec::new();
        write_tagged_corpus(&corpus, &mut buf).unwrap();
        fs::write(&path, buf).unwrap();
        path
    }

    fn config(&self, corpora: Vec<PathBuf>, out: &str, params: EvolutionParams) -> ExperimentConfig {
        ExperimentConfig {
            corpora,
            lexicon: Some(self.root.join("lexicon.txt")),
            out: self.root.join(out),
            params,
            ..Default::default()
        }
    }
}

fn read(path: &Path) -> Vec<u8> {
    fs::read(path).unwrap()
}

fn elitism_and_determinism() -> Verdict {
    let ws = Workspace::new();
    let corpus = ws.corpus("det", 200, 6);
    let params = EvolutionParams {
        population_size: 30,
        generations: 12,
        seed: 17,
        ..EvolutionParams::with_bounds(BoundsPreset::TABLE[0])
    };
    let a = evolve(&ws.config(vec![corpus.clone()], "a", params.clone())).map_err(|e| e.to_string())?;
    let b = evolve(&ws.config(vec![corpus], "b", params)).map_err(|e| e.to_string())?;
    let (a, b) = (&a[0], &b[0]);
    let history = &a.manifest.history;
    if let Some(w) = history.windows(2).find(|w| w[1].best.total < w[0].best.total) {
        return Err(format!(
            "best fell from {} to {} at generation {}",
            w[0].best.total, w[1].best.total, w[1].generation
        ));
    }
    for file in [commands::MANIFEST_FILE, commands::MODEL_FILE, commands::HISTORY_FILE] {
        if read(&a.dir.join(file)) != read(&b.dir.join(file)) {
            return Err(format!("{file} differs between identical runs"));
        }
    }
    Ok(format!(
        "best total {:.3} -> {:.3} over {} generations, manifests identical",
        history[0].best.total,
        history.last().unwrap().best.total,
        history.len() - 1
    ))
}

fn desk_scale_efficacy() -> Verdict {
    let start = Instant::now();
    let ws = Workspace::new();
    let corpus = ws.corpus("desk", 400, 7);
    let params = EvolutionParams {
        population_size: 50,
        generations: 30,
        seed: 7,
        ..EvolutionParams::with_bounds(BoundsPreset::TABLE[2])
    };
    let cfg = ws.config(vec![corpus], "runs", params);
    let outcome = evolve(&cfg).map_err(|e| e.to_string())?;
    let rows = evaluate(&cfg, &[], Split::Test).map_err(|e| e.to_string())?;
    let rate = outcome[0].manifest.train_compression_rate;
    let delta = rows[0].delta;
    let elapsed = start.elapsed();
    let detail = format!(
        "compression {rate:.2}%, accuracy {:.1}% -> {:.1}% (delta {delta:+.2}), {elapsed:.1?}",
        rows[0].original, rows[0].compressed
    );
    if delta >= -2.0 && (20.0..=23.0).contains(&rate) && elapsed < Duration::from_secs(300) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn one_decimal(cell: &str) -> bool {
    let body = cell.strip_prefix('-').unwrap_or(cell);
    match body.split_once('.') {
        Some((int, frac)) => {
            !int.is_empty()
                && int.bytes().all(|b| b.is_ascii_digit())
                && frac.len() == 1
                && frac.bytes().all(|b| b.is_ascii_digit())
        }
        None => false,
    }
}

fn report_fidelity() -> Verdict {
    let ws = Workspace::new();
    let names = ["books", "dvd", "kitchen"];
    let corpora: Vec<PathBuf> = names.iter().zip(10..).map(|(n, s)| ws.corpus(n, 120, s)).collect();
    let params = EvolutionParams {
        population_size: 12,
        generations: 3,
        seed: 3,
        ..EvolutionParams::with_bounds(BoundsPreset::TABLE[0])
    };
    let cfg = ws.config(corpora, "runs", params);
    evolve(&cfg).map_err(|e| e.to_string())?;
    let rows = evaluate(&cfg, &[], Split::Test).map_err(|e| e.to_string())?;
    let table = render_table(&rows);
    let lines: Vec<&str> = table.lines().collect();
    if lines.len() != 1 + names.len() + 1 {
        return Err(format!("expected {} lines, got:\n{table}", names.len() + 2));
    }
    for (line, name) in lines[1..].iter().zip(names.iter().chain([&AVERAGE])) {
        let cells: Vec<&str> = line.split_whitespace().collect();
        if cells.len() != 5
            || cells[0] != *name
            || cells[1] != "baseline"
            || !cells[2..].iter().all(|c| one_decimal(c))
        {
            return Err(format!("bad row `{line}`"));
        }
    }
    let avg = &rows[3];
    let mean = |f: fn(&parsec_cli::AccuracyDelta) -> f64| rows[..3].iter().map(f).sum::<f64>() / 3.0;
    if percent(avg.original) != percent(mean(|r| r.original)) || avg.delta != avg.compressed - avg.original {
        return Err(format!("Average row inconsistent: {avg:?}"));
    }
    if rows.iter().any(|r| r.delta != r.compressed - r.original) {
        return Err("delta != compressed - original".into());
    }
    Ok(format!("3 datasets + Average, one-decimal cells\n{}", table.trim_end()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("matcher oracle", matcher_oracle),
        ("punctuation conservation", punctuation_conservation),
        ("scoring oracle", scoring_oracle),
        ("fitness formula", fitness_formula),
        ("bound satisfaction", bound_satisfaction),
        ("elitism and determinism", elitism_and_determinism),
        ("desk-scale efficacy", desk_scale_efficacy),
        ("report fidelity", report_fidelity),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match verdict {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
