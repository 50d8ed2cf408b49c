//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use cocite_cli::{io, stages, RunConfig};
use cocite_core::analytics::{precision_recall, price_index, Measure};
use cocite_core::cocitation::aggregate_levels;
use cocite_core::matcher::{match_author_names, match_references, BibIndex};
use cocite_core::model::{
    ArticleType, AuthorName, Document, Level, PairKey, PubDate, ReferenceEntry, Season,
};
use cocite_core::parser::{parse_document, Abbreviations};
use cocite_core::rng;
use cocite_core::similarity::{
    author_overlap, bm25, build_idf, intellectual_overlap, symmetric_bm25, time_distance, tokenize,
    AuthorMatching, Bm25Params, Bm25Space, TokenizedText,
};
use cocite_core::synth::{generate, SynthConfig, SynthCorpus};
use rand::seq::SliceRandom;
use rand::Rng;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: u64, what: &str) -> Result<(), String> {
    ensure(elapsed < Duration::from_secs(limit_s), || {
        format!("{what} took {:.1}s, limit {limit_s}s", elapsed.as_secs_f64())
    })
}

// ---------------------------------------------------------------------------
// 1. nesting

fn parsed_corpus(corpus: &SynthCorpus) -> (Vec<Document>, BibIndex) {
    let index = BibIndex::from_raw(&corpus.index).expect("index");
    let abbr = Abbreviations::default();
    let docs = corpus
        .documents
        .iter()
        .map(|d| parse_document(d, &abbr).expect("synthetic document parses"))
        .collect();
    (docs, index)
}

/// Pair sets per level built directly from citation loci.
fn oracle_level_sets(docs: &[Document], index: &BibIndex) -> BTreeMap<Level, BTreeSet<PairKey>> {
    let mut sets: BTreeMap<Level, BTreeSet<PairKey>> = BTreeMap::new();
    for doc in docs {
        if !matches!(doc.article_type, ArticleType::Research | ArticleType::ShortCommunication) {
            continue;
        }
        let m = match_references(doc, index);
        let cites: Vec<_> = doc
            .citations
            .iter()
            .filter(|c| c.is_analyzed())
            .filter_map(|c| m.get(&c.ref_id).map(|r| (r.clone(), c.locus)))
            .collect();
        for (i, (ra, la)) in cites.iter().enumerate() {
            for (rb, lb) in &cites[i + 1..] {
                let Ok(pair) = PairKey::new(ra, rb) else { continue };
                let units = [
                    (Level::Article, true),
                    (Level::Section, la.section_index == lb.section_index),
                    (
                        Level::Paragraph,
                        (la.section_index, la.paragraph_index) == (lb.section_index, lb.paragraph_index),
                    ),
                    (
                        Level::Sentence,
                        (la.section_index, la.paragraph_index, la.sentence_index)
                            == (lb.section_index, lb.paragraph_index, lb.sentence_index),
                    ),
                    (
                        Level::Bracket,
                        (la.section_index, la.paragraph_index, la.sentence_index, la.bracket_index)
                            == (lb.section_index, lb.paragraph_index, lb.sentence_index, lb.bracket_index),
                    ),
                ];
                for (level, shared) in units {
                    if shared {
                        sets.entry(level).or_default().insert(pair.clone());
                    }
                }
            }
        }
    }
    sets
}

fn nesting() -> Result<String, String> {
    let start = Instant::now();
    let mut engine = Duration::ZERO;
    let mut report = Vec::new();
    for (documents, seed) in [(50, 1), (300, 2), (1000, 3)] {
        let corpus = generate(&SynthConfig { documents, seed, ..SynthConfig::default() });
        let t = Instant::now();
        let (docs, index) = parsed_corpus(&corpus);
        let admitted: Vec<_> = docs
            .iter()
            .filter(|d| matches!(d.article_type, ArticleType::Research | ArticleType::ShortCommunication))
            .map(|d| (d, match_references(d, &index)))
            .collect();
        let borrowed: Vec<_> = admitted.iter().map(|(d, m)| (*d, m)).collect();
        let sets = aggregate_levels("Synthetic Letters", &borrowed);
        engine += t.elapsed();
        let oracle = oracle_level_sets(&docs, &index);
        let mut counts = Vec::new();
        for level in Level::IN_ARTICLE {
            let engine: BTreeSet<PairKey> = sets.level_set(level).into_iter().cloned().collect();
            let expected = oracle.get(&level).cloned().unwrap_or_default();
            ensure(engine == expected, || {
                format!("{documents} docs: {level} set differs from the locus oracle")
            })?;
            counts.push(engine.len());
        }
        for w in Level::IN_ARTICLE.windows(2) {
            let (upper, lower) = (sets.level_set(w[0]), sets.level_set(w[1]));
            ensure(lower.is_subset(&upper), || {
                format!("{documents} docs: {} not a subset of {}", w[1], w[0])
            })?;
        }
        ensure(counts.windows(2).all(|c| c[0] >= c[1]), || format!("counts not monotone: {counts:?}"))?;
        report.push(format!("{documents} docs {counts:?}"));
    }
    within(engine, 5, "parsing and pair extraction")?;
    Ok(format!(
        "bracket ⊆ sentence ⊆ paragraph ⊆ section ⊆ article exactly, equal to locus oracle; {}; parse+extract {:.2}s (limit 5s), {:.2}s with generation and oracle",
        report.join("; "),
        engine.as_secs_f64(),
        start.elapsed().as_secs_f64()
    ))
}

// ---------------------------------------------------------------------------
// 2. BM25 oracle

/// Straight evaluation of the floored-IDF BM25 formulas with no shared code.
fn oracle_bm25(q: &[String], d: &[String], collection: &[Vec<String>], k1: f64, b: f64) -> f64 {
    let n = collection.len() as f64;
    let avg = collection.iter().map(|t| t.len()).sum::<usize>() as f64 / n;
    let mut seen = Vec::new();
    let mut score = 0.0;
    for t in q {
        if seen.contains(t) {
            continue;
        }
        seen.push(t.clone());
        let df = collection.iter().filter(|doc| doc.contains(t)).count() as f64;
        let idf = ((n - df + 0.5) / (df + 0.5)).ln().max(0.0);
        let tf = d.iter().filter(|x| *x == t).count() as f64;
        score += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * d.len() as f64 / avg));
    }
    score
}

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn bm25_oracle() -> Result<String, String> {
    let params = Bm25Params::default();
    ensure(params.k1 == 2.0 && params.b == 0.75, || "defaults are not k1=2, b=0.75".into())?;

    let mut rng = rng::stream(2024, "acceptance/bm25");
    let vocab = ["gene", "cell", "protein", "network", "folding", "motif", "yeast", "kinase", "signal", "assay"];
    let texts: Vec<String> = (0..10)
        .map(|_| {
            let n = rng.gen_range(3..=20);
            (0..n).map(|_| vocab[rng.gen_range(0..vocab.len())]).collect::<Vec<_>>().join(" ")
        })
        .collect();
    let tokenized: Vec<TokenizedText> = texts.iter().map(|t| tokenize(t, "")).collect();
    let collection: Vec<Vec<String>> = tokenized.iter().map(|t| t.tokens.clone()).collect();
    let idf = build_idf(&tokenized).map_err(|e| e.to_string())?;
    let space = Bm25Space::new(&tokenized, &idf, params).map_err(|e| e.to_string())?;
    let floored = idf.idf.values().filter(|v| **v == 0.0).count();
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let expected = oracle_bm25(&collection[i], &collection[j], &collection, 2.0, 0.75);
            let sym_expected = (expected + oracle_bm25(&collection[j], &collection[i], &collection, 2.0, 0.75)) / 2.0;
            let got = bm25(&tokenized[i], &tokenized[j], &idf, params).map_err(|e| e.to_string())?;
            let sym = symmetric_bm25(&tokenized[i], &tokenized[j], &idf, params).map_err(|e| e.to_string())?;
            for (g, e) in [(got, expected), (space.score(i, j), expected), (sym, sym_expected), (space.symmetric(i, j), sym_expected)] {
                worst = worst.max(rel_err(g, e));
            }
        }
    }
    ensure(worst <= 1e-9, || format!("max relative error {worst:e}"))?;
    ensure(floored > 0, || "fixture never exercises the IDF floor".into())?;

    let fixture: Vec<TokenizedText> = ["alpha alpha gamma", "beta delta epsilon", "beta zeta eta"]
        .iter()
        .map(|t| tokenize(t, ""))
        .collect();
    let idf = build_idf(&fixture).map_err(|e| e.to_string())?;
    let worked = bm25(&tokenize("alpha beta", ""), &fixture[0], &idf, params).map_err(|e| e.to_string())?;
    ensure((worked - 0.7662).abs() < 5e-5, || format!("worked fixture gave {worked}"))?;
    Ok(format!(
        "100 ordered pairs, max relative error {worst:.1e} (limit 1e-9), {floored} floored idf terms; worked fixture {worked:.4}"
    ))
}

// ---------------------------------------------------------------------------
// 3. overlap oracle

/// Name rule written out independently: same surname ignoring case, and
/// every given-name part of the shorter form pairs off with a distinct part
/// of the longer form (initials match on their letter).
fn oracle_names_match(a: &AuthorName, b: &AuthorName) -> bool {
    if a.surname.to_lowercase() != b.surname.to_lowercase() {
        return false;
    }
    let parts = |g: &str| -> Vec<String> {
        g.split(|c: char| c.is_whitespace() || c == '.' || c == '-')
            .filter(|p| !p.is_empty())
            .map(str::to_lowercase)
            .collect()
    };
    let (mut x, mut y) = (parts(&a.given), parts(&b.given));
    if x.len() > y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    let compatible = |p: &str, q: &str| {
        if p.chars().count() == 1 || q.chars().count() == 1 {
            p.chars().next() == q.chars().next()
        } else {
            p == q
        }
    };
    // try every injective assignment of x into y
    fn assign(x: &[String], y: &[String], used: &mut Vec<bool>, ok: &dyn Fn(&str, &str) -> bool) -> bool {
        let Some((first, rest)) = x.split_first() else { return true };
        for j in 0..y.len() {
            if !used[j] && ok(first, &y[j]) {
                used[j] = true;
                if assign(rest, y, used, ok) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    assign(&x, &y, &mut vec![false; y.len()], &compatible)
}

/// Largest injective author matching by exhaustive search.
fn oracle_max_matching(q: &[AuthorName], d: &[AuthorName]) -> usize {
    fn best(i: usize, q: &[AuthorName], d: &[AuthorName], used: &mut Vec<bool>) -> usize {
        if i == q.len() {
            return 0;
        }
        let mut top = best(i + 1, q, d, used);
        for j in 0..d.len() {
            if !used[j] && oracle_names_match(&q[i], &d[j]) {
                used[j] = true;
                top = top.max(1 + best(i + 1, q, d, used));
                used[j] = false;
            }
        }
        top
    }
    best(0, q, d, &mut vec![false; d.len()])
}

fn oracle_greedy(q: &[AuthorName], d: &[AuthorName]) -> usize {
    let walk = |short: &[AuthorName], long: &[AuthorName]| {
        let mut used = vec![false; long.len()];
        short
            .iter()
            .filter(|a| {
                let hit = (0..long.len()).find(|&j| !used[j] && oracle_names_match(a, &long[j]));
                hit.map(|j| used[j] = true).is_some()
            })
            .count()
    };
    match q.len().cmp(&d.len()) {
        std::cmp::Ordering::Less => walk(q, d),
        std::cmp::Ordering::Greater => walk(d, q),
        std::cmp::Ordering::Equal => walk(q, d).max(walk(d, q)),
    }
}

fn random_authors(rng: &mut impl Rng) -> Vec<AuthorName> {
    let surnames = ["Abrams", "Lee"];
    let givens = ["J.", "John", "John J.", "J. M.", "Jane", "K.", "Kim", "J. K.", "M."];
    (0..rng.gen_range(0..=4))
        .map(|_| {
            let s = surnames[rng.gen_range(0..surnames.len())];
            AuthorName::new(s, givens[rng.gen_range(0..givens.len())]).unwrap()
        })
        .collect()
}

fn random_refs(rng: &mut impl Rng) -> Vec<&'static str> {
    let mut r = vec!["r1", "r2", "r3", "r4", "r5", "r6", "r7", "r8"];
    r.shuffle(rng);
    r.truncate(rng.gen_range(0..=6));
    r
}

fn overlap_oracle() -> Result<String, String> {
    let name = |s: &str, g: &str| AuthorName::new(s, g).unwrap();
    let abrams = name("Abrams", "John J.");
    ensure(match_author_names(&abrams, &name("Abrams", "J.")), || "John J. Abrams ↔ J. Abrams should match".into())?;
    ensure(!match_author_names(&abrams, &name("Abrams", "J. M.")), || "John J. Abrams ↔ J. M. Abrams should not match".into())?;

    let mut rng = rng::stream(99, "acceptance/overlap");
    let mut greedy_below_exact = 0;
    for case in 0..100 {
        let (qa, da) = (random_authors(&mut rng), random_authors(&mut rng));
        let (qr, dr) = (random_refs(&mut rng), random_refs(&mut rng));

        let expected_intel = if qr.is_empty() || dr.is_empty() {
            None
        } else {
            Some(qr.iter().filter(|r| dr.contains(r)).count() as f64 / qr.len().min(dr.len()) as f64)
        };
        let qs: BTreeSet<&str> = qr.iter().copied().collect();
        let ds: BTreeSet<&str> = dr.iter().copied().collect();
        let got = intellectual_overlap(&qs, &ds);
        ensure(got == expected_intel, || format!("case {case}: intellectual {got:?} vs {expected_intel:?}"))?;

        let min = qa.len().min(da.len());
        let (exact, greedy) = if min == 0 {
            (None, None)
        } else {
            (
                Some(oracle_max_matching(&qa, &da) as f64 / min as f64),
                Some(oracle_greedy(&qa, &da) as f64 / min as f64),
            )
        };
        let got_exact = author_overlap(&qa, &da, AuthorMatching::Exact);
        let got_greedy = author_overlap(&qa, &da, AuthorMatching::Greedy);
        ensure(got_exact == exact, || format!("case {case}: exact author {got_exact:?} vs {exact:?}"))?;
        ensure(got_greedy == greedy, || format!("case {case}: greedy author {got_greedy:?} vs {greedy:?}"))?;
        for (a, b) in qa.iter().flat_map(|a| da.iter().map(move |b| (a, b))) {
            ensure(match_author_names(a, b) == oracle_names_match(a, b), || {
                format!("case {case}: name rule disagrees on {a:?} / {b:?}")
            })?;
        }
        if greedy < exact {
            greedy_below_exact += 1;
        }
    }
    Ok(format!(
        "100 random pairs equal to brute force (intellectual, exact and greedy author); Abrams examples pass; greedy < exact in {greedy_below_exact} case(s)"
    ))
}

// ---------------------------------------------------------------------------
// 4. imputation

fn imputation() -> Result<String, String> {
    let m = |y, mo| PubDate::with_month(y, mo).unwrap();
    let s = PubDate::with_season;
    let y = PubDate::year;
    let table: [(PubDate, PubDate, u32); 10] = [
        (m(2012, 3), m(2012, 3), 0),
        (m(2010, 1), m(2012, 7), 30),
        (s(2011, Season::Summer), y(2011), 0),
        (s(2012, Season::Spring), y(2012), 3),
        (s(2012, Season::Spring), m(2012, 9), 6),
        (y(2010), y(2012), 24),
        (s(2011, Season::Winter), m(2012, 1), 1),
        (s(2011, Season::Autumn), s(2011, Season::Spring), 6),
        (m(2009, 12), s(2010, Season::Spring), 3),
        (y(2013), s(2010, Season::Winter), 30),
    ];
    for (i, (a, b, want)) in table.iter().enumerate() {
        let (ab, ba) = (time_distance(a, b), time_distance(b, a));
        ensure(ab == *want && ba == *want, || format!("row {i}: got {ab}/{ba}, want {want}"))?;
    }
    Ok("10-row table matches hand values exactly (both argument orders)".into())
}

// ---------------------------------------------------------------------------
// 5. precision/recall

fn precision_recall_harness() -> Result<String, String> {
    let err = |e: cocite_core::Error| e.to_string();
    let pos: Vec<Option<f64>> = (0..3000).map(|i| Some(0.5 + i as f64 / 6001.0)).collect();
    let neg: Vec<Option<f64>> = (0..3000).map(|i| Some(i as f64 / 6001.0)).collect();
    let curve = precision_recall(&pos, &neg, true, 10_000, 5, "separable").map_err(err)?;
    let n = curve.sample_size;
    ensure(
        curve.points.iter().filter(|p| p.recall <= 1.0 && p.rank <= n).all(|p| p.precision == 1.0),
        || "separable data: precision below 1 before recall reaches 1".into(),
    )?;
    ensure(curve.points[n - 1].recall == 1.0, || "separable data: recall 1 not reached at rank n".into())?;

    let mut rng = rng::stream(6, "acceptance/pr");
    let pos: Vec<Option<f64>> = (0..500).map(|_| Some(rng.gen_range(0.0..1.0))).collect();
    let neg: Vec<Option<f64>> = (0..800).map(|_| rng.gen_bool(0.9).then(|| rng.gen_range(0.0..0.8))).collect();
    let curve = precision_recall(&pos, &neg, true, 10_000, 6, "equal").map_err(err)?;
    let last = curve.points.last().unwrap();
    ensure(last.precision == 0.5 && last.recall == 1.0, || {
        format!("final point precision {} recall {}", last.precision, last.recall)
    })?;

    // byte-identical pr.csv across two runs with one seed
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = synthetic_run(dir.path(), 60, 21, "pr-input")?;
    let first = std::fs::read(cfg.out.join(io::PR)).map_err(|e| e.to_string())?;
    stages::pr(&cfg).map_err(|e| format!("{e:#}"))?;
    let second = std::fs::read(cfg.out.join(io::PR)).map_err(|e| e.to_string())?;
    ensure(first == second, || "pr.csv differs between runs with the same seed".into())?;
    let rows = first.iter().filter(|&&b| b == b'\n').count();
    Ok(format!(
        "(a) precision 1.0 up to recall 1.0 on {n}+{n} separable pairs; (b) final point 0.5/1.0 exactly; (c) {rows}-line pr.csv byte-identical on rerun"
    ))
}

// ---------------------------------------------------------------------------
// 6 & 7. end to end

fn synthetic_run(dir: &Path, documents: usize, seed: u64, name: &str) -> Result<RunConfig, String> {
    let input = dir.join(format!("{name}-input"));
    std::fs::create_dir_all(&input).map_err(|e| e.to_string())?;
    let corpus = generate(&SynthConfig {
        documents,
        journals: vec!["Alpha".into(), "Beta".into()],
        seed,
        ..SynthConfig::default()
    });
    io::write_jsonl(&input.join("corpus.jsonl"), &corpus.documents).map_err(|e| e.to_string())?;
    io::write_jsonl(&input.join("index.jsonl"), &corpus.index).map_err(|e| e.to_string())?;
    let cfg = RunConfig {
        corpus: vec![input.join("corpus.jsonl")],
        index: Some(input.join("index.jsonl")),
        out: dir.join(name),
        seed,
        ..RunConfig::default()
    };
    stages::run_all(&cfg).map_err(|e| format!("{e:#}"))?;
    Ok(cfg)
}

fn monotonicity() -> Result<String, String> {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = synthetic_run(dir.path(), 300, 17, "mono")?;
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(cfg.out.join(io::SUMMARY)).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let mut means: BTreeMap<(String, String, String), f64> = BTreeMap::new();
    for s in summary["summaries"].as_array().ok_or("no summaries")? {
        means.insert(
            (s["journal"].as_str().unwrap().into(), s["measure"].as_str().unwrap().into(), s["level"].as_str().unwrap().into()),
            s["mean"].as_f64().unwrap(),
        );
    }
    let mut lines = Vec::new();
    for journal in ["Alpha", "Beta"] {
        for measure in Measure::ALL {
            let series: Vec<f64> = Level::IN_ARTICLE
                .iter()
                .map(|l| means.get(&(journal.into(), measure.as_str().into(), l.as_str().into())).copied())
                .collect::<Option<_>>()
                .ok_or_else(|| format!("{journal} {measure}: missing level summary"))?;
            let ok = series.windows(2).all(|w| {
                if measure.higher_is_closer() {
                    w[0] < w[1]
                } else {
                    w[0] > w[1]
                }
            });
            ensure(ok, || format!("{journal} {measure}: means not strictly monotone {series:?}"))?;
            if journal == "Alpha" {
                lines.push(format!(
                    "{measure} {}",
                    series.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>().join("→")
                ));
            }
        }
    }
    within(start.elapsed(), 30, "monotonicity run")?;
    Ok(format!(
        "2 journals × 4 measures strictly monotone article→bracket in {:.1}s; Alpha: {}",
        start.elapsed().as_secs_f64(),
        lines.join(", ")
    ))
}

fn data_rows(dir: &Path) -> Result<HashMap<String, Vec<u8>>, String> {
    let mut out = HashMap::new();
    for f in [io::PAIRS, io::MEASURES, io::SUMMARY, io::ECDF, io::STATS, io::PR, io::VALIDATION] {
        let text = std::fs::read_to_string(dir.join(f)).map_err(|e| format!("{f}: {e}"))?;
        let data: String = text
            .lines()
            .filter(|l| !l.starts_with("# cocite"))
            .map(|l| format!("{l}\n"))
            .collect();
        out.insert(f.to_string(), data.into_bytes());
    }
    Ok(out)
}

fn determinism_and_throughput() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let t0 = Instant::now();
    let first = synthetic_run(dir.path(), 1000, 31, "first")?;
    let first_time = t0.elapsed();
    let t1 = Instant::now();
    let second = synthetic_run(dir.path(), 1000, 31, "second")?;
    let second_time = t1.elapsed();
    within(first_time, 60, "first 1000-document run")?;
    within(second_time, 60, "second 1000-document run")?;
    let (a, b) = (data_rows(&first.out)?, data_rows(&second.out)?);
    for (name, bytes) in &a {
        // validation.json records input paths, which differ by run name
        if name == io::VALIDATION {
            continue;
        }
        ensure(b.get(name) == Some(bytes), || format!("{name} differs between runs"))?;
    }
    let docs: Vec<Document> = io::read_jsonl(&first.out.join(io::DOCUMENTS)).map_err(|e| e.to_string())?;
    let refs = docs.iter().map(|d| d.references.len()).sum::<usize>() as f64 / docs.len() as f64;
    let rows = a[io::MEASURES].iter().filter(|&&c| c == b'\n').count() - 1;
    Ok(format!(
        "{} documents, {refs:.1} references each, {rows} measured pairs; runs {:.1}s and {:.1}s (limit 60s); all data rows byte-identical",
        docs.len(),
        first_time.as_secs_f64(),
        second_time.as_secs_f64()
    ))
}

// ---------------------------------------------------------------------------
// 8. Price Index

fn price_index_check() -> Result<String, String> {
    let doc = |years: &[i32]| Document {
        doc_id: "P".into(),
        journal_name: "J".into(),
        date: PubDate::year(2015),
        article_type: ArticleType::Research,
        title: String::new(),
        abstract_text: String::new(),
        authors: Vec::new(),
        references: years
            .iter()
            .enumerate()
            .map(|(i, &y)| ReferenceEntry { ref_id: format!("r{i}"), raw: String::new(), year: Some(y), key: None })
            .collect(),
        citations: Vec::new(),
    };
    let base = [2012, 2011, 2008];
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for p in perms {
        let years: Vec<i32> = p.iter().map(|&i| base[i]).collect();
        let got = price_index(&doc(&years));
        ensure(got == Some(2.0 / 3.0), || format!("{years:?}: {got:?}"))?;
    }
    let mut rng = rng::stream(8, "acceptance/price");
    let mut years: Vec<i32> = (0..40).map(|_| rng.gen_range(1995..=2015)).collect();
    let reference = price_index(&doc(&years));
    for _ in 0..50 {
        years.shuffle(&mut rng);
        ensure(price_index(&doc(&years)) == reference, || "permutation changed the Price Index".into())?;
    }
    Ok("refs {2012, 2011, 2008} cited in 2015 → 2/3 exactly in all 6 orders; 50 shuffles of 40 refs unchanged".into())
}

fn main() {
    let checks: [(&str, Check); 8] = [
        ("1 nesting invariant", nesting),
        ("2 BM25 oracle", bm25_oracle),
        ("3 overlap oracle", overlap_oracle),
        ("4 date imputation", imputation),
        ("5 precision/recall harness", precision_recall_harness),
        ("6 end-to-end monotonicity", monotonicity),
        ("7 determinism and throughput", determinism_and_throughput),
        ("8 Price Index", price_index_check),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in checks {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            });
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criterion/criteria failed");
        std::process::exit(1);
    }
}
