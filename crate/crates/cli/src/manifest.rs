//! Corpus manifest: one JSON file listing speakers and their utterances.
//!
//! ```json
//! {
//!   "speakers": [
//!     {
//!       "speaker_id": "ABA",
//!       "l1_label": "Arabic",
//!       "utterances": [
//!         {
//!           "utterance_id": "arctic_a0001",
//!           "prompt": "Author of the danger trail",
//!           "asr_transcript": {"path": "asr/arctic_a0001.txt"},
//!           "annotation": "annotations/ABA.csv"
//!         }
//!       ]
//!     }
//!   ]
//! }
//! ```
//!
//! Texts are either inline strings or `{"path": ...}`. Relative paths resolve
//! against the manifest's directory. Annotation files ending in `.TextGrid`
//! are read as Praat TextGrids, anything else as annotation CSV.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{read_to_string, Error, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub speakers: Vec<Speaker>,
    /// Directory relative paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Speaker {
    pub speaker_id: String,
    #[serde(default)]
    pub l1_label: Option<String>,
    #[serde(default)]
    pub utterances: Vec<Utterance>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Utterance {
    pub utterance_id: String,
    pub prompt: TextSource,
    pub asr_transcript: TextSource,
    #[serde(default)]
    pub annotation: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TextSource {
    Inline(String),
    File { path: PathBuf },
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Manifest> {
        let text = read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("")).to_path_buf();
        Manifest::parse(&text, base).map_err(|e| e.in_file(path))
    }

    pub fn parse(text: &str, base_dir: PathBuf) -> Result<Manifest> {
        let mut manifest: Manifest = serde_json::from_str(text)?;
        manifest.base_dir = base_dir;
        manifest.validate()?;
        Ok(manifest)
    }

    /// Speaker ids are unique and usable as file names; utterance ids are
    /// unique per speaker; every referenced file exists.
    pub fn validate(&self) -> Result<()> {
        let mut speakers = BTreeSet::new();
        for s in &self.speakers {
            check_id("speaker", &s.speaker_id)?;
            if !speakers.insert(&s.speaker_id) {
                return Err(Error::Invalid(format!("duplicate speaker `{}`", s.speaker_id)));
            }
            let mut utterances = BTreeSet::new();
            for u in &s.utterances {
                check_id("utterance", &u.utterance_id)?;
                if !utterances.insert(&u.utterance_id) {
                    return Err(Error::Invalid(format!(
                        "duplicate utterance `{}` for speaker `{}`",
                        u.utterance_id, s.speaker_id
                    )));
                }
                let paths = [&u.prompt, &u.asr_transcript]
                    .into_iter()
                    .filter_map(|t| match t {
                        TextSource::File { path } => Some(path),
                        TextSource::Inline(_) => None,
                    })
                    .chain(u.annotation.as_ref());
                for p in paths {
                    let full = self.resolve(p);
                    if !full.is_file() {
                        return Err(Error::Invalid(format!(
                            "utterance `{}` references missing file {}",
                            u.utterance_id,
                            full.display()
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        self.base_dir.join(path)
    }

    pub fn text(&self, source: &TextSource) -> Result<String> {
        match source {
            TextSource::Inline(s) => Ok(s.clone()),
            TextSource::File { path } => read_to_string(&self.resolve(path)),
        }
    }
}

fn check_id(what: &str, id: &str) -> Result<()> {
    let bad = id.is_empty()
        || id == "."
        || id == ".."
        || id.chars().any(|c| matches!(c, '/' | '\\' | '\0') || c.is_control());
    if bad {
        return Err(Error::Invalid(format!("{what} id `{id}` cannot be used as a file name")));
    }
    Ok(())
}
