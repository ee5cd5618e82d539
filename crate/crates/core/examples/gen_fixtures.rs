//! Regenerates the files under `fixtures/`.
//!
//! ```text
//! cargo run -p snex-core --example gen_fixtures -- fixtures
//! ```
//!
//! Output is a pure function of the seed below.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const SEED: u64 = 0x5eed_2012;

const FIRST: &[&str] = &[
    "Alia", "Bakri", "Chandra", "Dewi", "Elias", "Farid", "Gita", "Hafiz", "Indra", "Jasmin", "Kamal", "Lina", "Malik",
    "Nadia", "Omar", "Putri", "Rafiq", "Salma", "Taufik", "Umi",
];
const LAST: &[&str] = &[
    "Abidin", "Baharom", "Daud", "Effendi", "Ghazali", "Harun", "Ishak", "Jaafar", "Karim", "Latif", "Mansor", "Nawawi",
    "Osman", "Rahim", "Sulaiman", "Talib", "Usman", "Wahab", "Yusof", "Zakaria",
];
const LAB_TOPICS: &[&[&str]] = &[
    &["ontology", "semantic", "reasoning", "knowledge"],
    &["retrieval", "indexing", "query", "ranking"],
    &["grid", "scheduling", "cluster", "distributed"],
    &["image", "segmentation", "vision", "recognition"],
    &["fuzzy", "optimisation", "genetic", "heuristic"],
    &["malay", "corpus", "stemming", "translation"],
    &["network", "wireless", "routing", "sensor"],
    &["software", "testing", "metrics", "requirements"],
];
const TITLE_GLUE: &[&str] = &["approach", "framework", "model", "study", "evaluation", "method", "system"];
const VENUES: &[&str] = &["ICEEI", "J. Inf. Sci.", "ISITA", "KMICe", "SoCPaR", "DMO", "J. Comput. Sci."];
const TARGET_PERSONS: usize = 67;
const TARGET_PAIRS: usize = 253;

struct Record {
    id: String,
    title: String,
    authors: Vec<usize>,
    venue: String,
    year: i32,
}

fn pairs_of(authors: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &a) in authors.iter().enumerate() {
        for &b in &authors[i + 1..] {
            out.push((a.min(b), a.max(b)));
        }
    }
    out
}

fn title(rng: &mut ChaCha8Rng, lab: usize) -> String {
    let topic = LAB_TOPICS[lab % LAB_TOPICS.len()];
    let mut words: Vec<&str> = topic.choose_multiple(rng, 2).copied().collect();
    words.push(TITLE_GLUE.choose(rng).unwrap());
    words.push("for");
    words.push(LAB_TOPICS.choose(rng).unwrap().choose(rng).unwrap());
    let mut t = words.join(" ");
    t[..1].make_ascii_uppercase();
    t
}

fn dblp(rng: &mut ChaCha8Rng) -> (Vec<String>, Vec<Record>, BTreeSet<(usize, usize)>) {
    let mut combos: Vec<String> = FIRST.iter().flat_map(|f| LAST.iter().map(move |l| format!("{f} {l}"))).collect();
    combos.shuffle(rng);
    let names: Vec<String> = combos.into_iter().take(TARGET_PERSONS).collect();
    let labs = LAB_TOPICS.len();
    let lab_of = |p: usize| p % labs;
    let members: Vec<Vec<usize>> = (0..labs).map(|l| (0..TARGET_PERSONS).filter(|&p| lab_of(p) == l).collect()).collect();

    let mut pairs = BTreeSet::new();
    let mut records: Vec<Record> = Vec::new();
    let push = |rng: &mut ChaCha8Rng, records: &mut Vec<Record>, authors: Vec<usize>| {
        let lab = lab_of(authors[0]);
        records.push(Record {
            id: format!("dblp-{:04}", records.len() + 1),
            title: title(rng, lab),
            authors,
            venue: VENUES.choose(rng).unwrap().to_string(),
            year: rng.random_range(2000..=2012),
        });
    };

    // Every person gets at least one co-authored record.
    let mut covered = BTreeSet::new();
    for p in 0..TARGET_PERSONS {
        if covered.contains(&p) {
            continue;
        }
        let q = *members[lab_of(p)].iter().filter(|&&q| q != p).collect::<Vec<_>>().choose(rng).unwrap();
        let authors = vec![p, *q];
        pairs.extend(pairs_of(&authors));
        covered.extend(authors.iter().copied());
        push(rng, &mut records, authors);
    }

    // Grow the co-author graph to the target pair count.
    let mut attempts = 0;
    while pairs.len() < TARGET_PAIRS {
        attempts += 1;
        let size = if attempts > 5000 { 2 } else { rng.random_range(2..=4) };
        let lab = rng.random_range(0..labs);
        let mut authors: Vec<usize> = members[lab].choose_multiple(rng, size).copied().collect();
        if rng.random_bool(0.15) {
            let other = (lab + rng.random_range(1..labs)) % labs;
            authors.pop();
            authors.push(*members[other].choose(rng).unwrap());
        }
        let fresh = pairs_of(&authors).into_iter().filter(|p| !pairs.contains(p)).count();
        if fresh == 0 || pairs.len() + fresh > TARGET_PAIRS {
            continue;
        }
        pairs.extend(pairs_of(&authors));
        push(rng, &mut records, authors);
    }

    // Repeat collaborations and solo papers; these add support, not pairs.
    for _ in 0..180 {
        let base = records.choose(rng).unwrap().authors.clone();
        let k = rng.random_range(1..=base.len());
        let authors: Vec<usize> = base.choose_multiple(rng, k).copied().collect();
        push(rng, &mut records, authors);
    }
    assert_eq!(pairs.len(), TARGET_PAIRS);
    assert_eq!(records.iter().flat_map(|r| r.authors.iter()).collect::<BTreeSet<_>>().len(), TARGET_PERSONS);
    (names, records, pairs)
}

fn write_dblp(dir: &Path, rng: &mut ChaCha8Rng) {
    let (names, records, pairs) = dblp(rng);
    fs::create_dir_all(dir).unwrap();
    let mut jsonl = String::new();
    let mut bib = String::new();
    for r in &records {
        let authors: Vec<&str> = r.authors.iter().map(|&a| names[a].as_str()).collect();
        let line = json!({"id": r.id, "title": r.title, "authors": authors, "venue": r.venue, "year": r.year});
        writeln!(jsonl, "{line}").unwrap();
        let bib_authors: Vec<String> = authors
            .iter()
            .map(|a| {
                let (first, last) = a.split_once(' ').unwrap();
                format!("{last}, {first}")
            })
            .collect();
        writeln!(
            bib,
            "@inproceedings{{{},\n  author = {{{}}},\n  title = {{{}}},\n  booktitle = {{{}}},\n  year = {}\n}}\n",
            r.id,
            bib_authors.join(" and "),
            r.title,
            r.venue,
            r.year
        )
        .unwrap();
    }
    fs::write(dir.join("records.jsonl"), jsonl).unwrap();
    fs::write(dir.join("records.bib"), bib).unwrap();
    let mut seeds = String::from("# benchmark persons, one per line\n");
    for n in &names {
        writeln!(seeds, "{n}").unwrap();
    }
    fs::write(dir.join("seeds.txt"), seeds).unwrap();
    let mut edges = String::from("# author-coauthor benchmark\n");
    for (a, b) in &pairs {
        writeln!(edges, "{}\t{}", names[*a], names[*b]).unwrap();
    }
    fs::write(dir.join("benchmark.tsv"), edges).unwrap();
}

struct Persona {
    host: &'static str,
    section: &'static str,
    vocab: &'static [&'static str],
}

const ACADEMIC: &[&str] = &[
    "faculty", "professor", "research", "publication", "supervision", "thesis", "lecture", "conference", "journal",
    "computing", "information", "science", "laboratory", "grant",
];
const NAMESAKES: &[Persona] = &[
    Persona {
        host: "bizdaily.example.com",
        section: "company",
        vocab: &["director", "board", "shares", "holdings", "annual", "revenue", "merger", "chairman", "investors"],
    },
    Persona {
        host: "sportsnet.example.org",
        section: "player",
        vocab: &["striker", "match", "goal", "league", "coach", "season", "stadium", "transfer", "injury"],
    },
    Persona {
        host: "clinic.example.net",
        section: "doctor",
        vocab: &["patient", "surgery", "clinic", "appointment", "cardiology", "hospital", "treatment", "nurse"],
    },
    Persona {
        host: "heritage.example.org",
        section: "archive",
        vocab: &["sultan", "history", "palace", "royal", "museum", "manuscript", "dynasty", "ceremony"],
    },
];
const COMMON: &[&str] = &["the", "and", "of", "in", "a", "for", "with", "on", "at", "news", "page", "about"];

struct Subject {
    name: &'static str,
    slug: &'static str,
    pages: usize,
    /// Shares of the academic persona followed by namesakes from `NAMESAKES`.
    split: &'static [(usize, f64)],
}

const SUBJECTS: &[Subject] = &[
    Subject { name: "Arif Rahman Hamid", slug: "arhamid", pages: 85, split: &[(99, 0.6), (0, 0.25), (3, 0.15)] },
    Subject { name: "Amin Mohd Zaki", slug: "amzaki", pages: 90, split: &[(99, 0.5), (1, 0.3), (2, 0.2)] },
    Subject { name: "Shafie Azlan Mohd Nor", slug: "samnor", pages: 134, split: &[(99, 0.55), (0, 0.25), (1, 0.2)] },
    Subject {
        name: "Tuan Ismail Tuan Salleh",
        slug: "titsalleh",
        pages: 189,
        split: &[(99, 0.4), (3, 0.35), (2, 0.15), (0, 0.1)],
    },
    Subject { name: "Jalil Md Kassim", slug: "jmkassim", pages: 41, split: &[(99, 0.7), (1, 0.3)] },
];
/// Collaborations among the academic personas; the five-name benchmark.
const COLLAB: &[(usize, usize)] = &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (0, 3)];
const ACADEMIC_HOST: &str = "fcs.uni-example.edu";

fn url_variant(rng: &mut ChaCha8Rng, host: &str, path: &str) -> String {
    let host = if rng.random_bool(0.2) { host.to_uppercase() } else { host.to_string() };
    let port = if rng.random_bool(0.15) { ":80" } else { "" };
    let frag = if rng.random_bool(0.1) { "#top" } else { "" };
    let scheme = if rng.random_bool(0.1) { "HTTP" } else { "http" };
    format!("{scheme}://{host}{port}{path}{frag}")
}

fn sentence(rng: &mut ChaCha8Rng, vocab: &[&str], len: usize) -> Vec<String> {
    (0..len)
        .map(|_| {
            let pool = if rng.random_bool(0.35) { COMMON } else { vocab };
            pool.choose(rng).unwrap().to_string()
        })
        .collect()
}

fn write_five_names(dir: &Path, rng: &mut ChaCha8Rng) {
    fs::create_dir_all(dir).unwrap();
    let mut jsonl = String::new();
    let mut truth: BTreeMap<&str, Vec<Vec<String>>> = BTreeMap::new();
    let mut total = 0;
    for (si, s) in SUBJECTS.iter().enumerate() {
        let mut counts: Vec<usize> = s.split.iter().map(|(_, f)| (f * s.pages as f64).floor() as usize).collect();
        counts[0] += s.pages - counts.iter().sum::<usize>();
        let mut blocks = Vec::new();
        let mut k = 0;
        for (&(persona, _), &count) in s.split.iter().zip(&counts) {
            let mut block = Vec::new();
            for _ in 0..count {
                k += 1;
                let id = format!("{}-{k:03}", s.slug);
                let (host, section, vocab): (&str, &str, &[&str]) = if persona == 99 {
                    (ACADEMIC_HOST, "staff", ACADEMIC)
                } else {
                    let p = &NAMESAKES[persona];
                    (p.host, p.section, p.vocab)
                };
                let sub = rng.random_range(1..=4);
                let url = url_variant(rng, host, &format!("/{section}/{}/p{sub}/{k}.html", s.slug));
                let (lead, tail) = (rng.random_range(8..16), rng.random_range(10..24));
                let mut body = sentence(rng, vocab, lead);
                body.push(s.name.to_string());
                body.extend(sentence(rng, vocab, tail));
                if persona == 99 {
                    let partners: Vec<usize> =
                        COLLAB.iter().filter_map(|&(a, b)| if a == si { Some(b) } else if b == si { Some(a) } else { None }).collect();
                    if !partners.is_empty() && rng.random_bool(0.3) {
                        body.push("with".into());
                        body.push(SUBJECTS[*partners.choose(rng).unwrap()].name.to_string());
                        body.extend(sentence(rng, vocab, 4));
                    }
                }
                let title_words = sentence(rng, vocab, 3).join(" ");
                let line = json!({
                    "id": id,
                    "url": url,
                    "title": format!("{} | {title_words}", s.name),
                    "body": body.join(" "),
                    "source_tag": s.name,
                });
                writeln!(jsonl, "{line}").unwrap();
                block.push(id);
            }
            blocks.push(block);
        }
        total += k;
        truth.insert(s.name, blocks);
    }
    assert_eq!(total, 539);
    fs::write(dir.join("corpus.jsonl"), jsonl).unwrap();
    fs::write(dir.join("truth.json"), serde_json::to_string_pretty(&truth).unwrap() + "\n").unwrap();
    let mut seeds = String::from("# ambiguous names\n");
    for s in SUBJECTS {
        writeln!(seeds, "{}", s.name).unwrap();
    }
    fs::write(dir.join("seeds.txt"), seeds).unwrap();
    let mut edges = String::from("# collaborations of the academic personas\n");
    for &(a, b) in COLLAB {
        writeln!(edges, "{}\t{}", SUBJECTS[a].name, SUBJECTS[b].name).unwrap();
    }
    fs::write(dir.join("benchmark.tsv"), edges).unwrap();
}

fn main() {
    let root = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into());
    let root = Path::new(&root);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    write_dblp(&root.join("dblp"), &mut rng);
    write_five_names(&root.join("five_names"), &mut rng);
    println!("fixtures written to {}", root.display());
}
