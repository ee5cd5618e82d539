//! Corpus ingestion formats and the on-disk artifact.

use std::fs;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Corpus, CorpusError, Document};

pub const CORPUS_FILE: &str = "corpus.json";
pub const MANIFEST_FILE: &str = "manifest.json";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io { path: path.display().to_string(), source }
}

/// One JSON document object per line (`id`, `url`, `title`, `body`, optional
/// `source_tag`). Blank lines are skipped.
pub fn read_jsonl<R: Read>(reader: R, origin: &str) -> Result<Vec<Document>, CorpusError> {
    let mut docs = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|source| CorpusError::Io { path: origin.to_string(), source })?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document = serde_json::from_str(&line).map_err(|e| CorpusError::Parse {
            path: origin.to_string(),
            line: i + 1,
            message: e.to_string(),
        })?;
        docs.push(doc);
    }
    Ok(docs)
}

pub fn read_jsonl_file(path: &Path) -> Result<Vec<Document>, CorpusError> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    read_jsonl(file, &path.display().to_string())
}

/// Directory of text files: file name is the doc id, the first line is the
/// title and the remainder the body. Files are read in name order; hidden
/// files and subdirectories are ignored.
pub fn read_dir(dir: &Path) -> Result<Vec<Document>, CorpusError> {
    let mut entries = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        let entry = entry.map_err(io_err(dir))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if name.starts_with('.') || !entry.file_type().map_err(io_err(dir))?.is_file() {
            continue;
        }
        entries.push((name, entry.path()));
    }
    entries.sort();
    entries
        .into_iter()
        .map(|(name, path)| {
            let text = fs::read_to_string(&path).map_err(io_err(&path))?;
            let (title, body) = text.split_once('\n').unwrap_or((text.as_str(), ""));
            Ok(Document {
                doc_id: name,
                url: String::new(),
                title: title.trim_end_matches('\r').to_string(),
                body: body.to_string(),
                source_tag: "file".into(),
            })
        })
        .collect()
}

/// Summary written next to a serialized corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub documents: usize,
    pub tokens: usize,
    pub vocabulary: usize,
    /// SHA-256 of the serialized corpus file.
    pub checksum: String,
    pub created_unix: u64,
}

impl Corpus {
    /// Canonical serialized form; identical corpora give identical bytes.
    pub fn to_json_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("corpus serializes")
    }

    pub fn checksum(&self) -> String {
        let digest = Sha256::digest(self.to_json_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Writes `corpus.json` and `manifest.json` into `dir`, creating it.
    pub fn save(&self, dir: &Path) -> Result<CorpusManifest, CorpusError> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let bytes = self.to_json_bytes();
        let corpus_path = dir.join(CORPUS_FILE);
        fs::write(&corpus_path, &bytes).map_err(io_err(&corpus_path))?;
        let manifest = CorpusManifest {
            documents: self.len(),
            tokens: self.token_count(),
            vocabulary: self.vocabulary_size(),
            checksum: self.checksum(),
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let manifest_path = dir.join(MANIFEST_FILE);
        let json = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
        fs::write(&manifest_path, json).map_err(io_err(&manifest_path))?;
        Ok(manifest)
    }

    /// Loads a corpus saved by [`Corpus::save`], verifying the index.
    pub fn load(dir: &Path) -> Result<Corpus, CorpusError> {
        let path = dir.join(CORPUS_FILE);
        let bytes = fs::read(&path).map_err(io_err(&path))?;
        serde_json::from_slice(&bytes).map_err(|e| CorpusError::Parse {
            path: path.display().to_string(),
            line: e.line(),
            message: e.to_string(),
        })
    }

    /// Loads from a saved artifact directory, a JSON-lines file, or a
    /// directory of text files, whichever `path` is.
    pub fn open(path: &Path) -> Result<Corpus, CorpusError> {
        if path.is_dir() {
            if path.join(CORPUS_FILE).is_file() {
                return Corpus::load(path);
            }
            return Corpus::ingest(read_dir(path)?);
        }
        Corpus::ingest(read_jsonl_file(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_reader_reports_line() {
        let input = "{\"id\":\"a\",\"url\":\"http://x\",\"title\":\"t\",\"body\":\"b\"}\n\nnot json\n";
        let err = read_jsonl(input.as_bytes(), "mem").unwrap_err();
        assert!(err.to_string().starts_with("mem:3:"), "{err}");
        let first_line = input.lines().next().unwrap();
        let docs = read_jsonl(first_line.as_bytes(), "mem").unwrap();
        assert_eq!(docs.len(), 1);
        assert_eq!(docs[0].doc_id, "a");
    }

    #[test]
    fn text_directory_mode() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("b.txt"), "Second\nbody two").unwrap();
        fs::write(dir.path().join("a.txt"), "First title\nbody one\nmore").unwrap();
        fs::write(dir.path().join(".hidden"), "x").unwrap();
        let docs = read_dir(dir.path()).unwrap();
        assert_eq!(docs.len(), 2);
        assert_eq!(docs[0].doc_id, "a.txt");
        assert_eq!(docs[0].title, "First title");
        assert_eq!(docs[0].body, "body one\nmore");
        assert_eq!(Corpus::open(dir.path()).unwrap().len(), 2);
    }

    #[test]
    fn empty_directory_gives_empty_corpus() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(Corpus::open(dir.path()).unwrap().len(), 0);
    }

    #[test]
    fn save_load_and_checksum_are_stable() {
        let c = Corpus::ingest(vec![Document::new("a", "http://x/a", "T", "one two")]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let m1 = c.save(dir.path()).unwrap();
        assert_eq!(m1.documents, 1);
        assert_eq!(m1.tokens, 3);
        let loaded = Corpus::open(dir.path()).unwrap();
        assert_eq!(loaded, c);
        let dir2 = tempfile::tempdir().unwrap();
        let m2 = loaded.save(dir2.path()).unwrap();
        assert_eq!(m1.checksum, m2.checksum);
    }
}
