//! On-disk JSON formats: emission files and trained-model files.
//!
//! Floats are serialized as shortest round-trip decimals, so write → read is
//! bitwise lossless. Reading stays separate from validation: what the file
//! says is what the caller gets, and `validate_emissions` is applied by the
//! commands that need a guaranteed-normalized sequence.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use editprob::{Alphabet, EmissionSequence, Frame};
use toylab::{ToyModel, TrainReport};

/// The emission-file schema: alphabet symbols (single characters), the EOS
/// symbol, per-frame distributions with `r` in `[consume, insert, delete]`
/// order, and the closing insertion distribution.
#[derive(Debug, Serialize, Deserialize)]
pub struct EmissionFile {
    pub alphabet: Vec<String>,
    pub eos: String,
    pub frames: Vec<FrameEntry>,
    pub final_ins: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FrameEntry {
    pub y: Vec<f64>,
    pub r: [f64; 3],
    pub ins: Vec<f64>,
}

impl EmissionFile {
    #[cfg(test)]
    fn from_parts(alphabet: &Alphabet, em: &EmissionSequence<f64>) -> Self {
        EmissionFile {
            alphabet: alphabet.symbols().iter().map(|c| c.to_string()).collect(),
            eos: alphabet.symbol(alphabet.eos()).to_string(),
            frames: em
                .frames
                .iter()
                .map(|f| FrameEntry { y: f.y.clone(), r: f.r, ins: f.ins.clone() })
                .collect(),
            final_ins: em.final_ins.clone(),
        }
    }

    /// Decodes into library types without validating the distributions.
    pub fn into_parts(self) -> Result<(Alphabet, EmissionSequence<f64>)> {
        let single = |s: &String| -> Result<char> {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Ok(c),
                _ => bail!("alphabet entries must be single characters, got {s:?}"),
            }
        };
        let symbols: Vec<char> = self.alphabet.iter().map(single).collect::<Result<_>>()?;
        let eos = single(&self.eos)?;
        let alphabet = Alphabet::new(symbols, eos)?;
        let frames = self
            .frames
            .into_iter()
            .map(|f| Frame { y: f.y, r: f.r, ins: f.ins })
            .collect();
        let em = EmissionSequence { frames, final_ins: self.final_ins };
        Ok((alphabet, em))
    }
}

/// Reads an emission file as written, unvalidated.
pub fn read_emissions(path: &Path) -> Result<(Alphabet, EmissionSequence<f64>)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading emissions {}", path.display()))?;
    let file: EmissionFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing emissions {}", path.display()))?;
    file.into_parts()
}

/// A trained model plus its training report, as one self-describing file.
#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub alphabet: Vec<String>,
    pub eos: String,
    pub feature_dim: usize,
    pub params: Vec<f64>,
    pub report: ReportEntry,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ReportEntry {
    pub epoch_losses: Vec<f64>,
    pub epoch_heldout_accuracy: Vec<f64>,
    pub final_accuracy: f64,
    pub wall_clock_secs: f64,
}

impl From<&TrainReport> for ReportEntry {
    fn from(r: &TrainReport) -> Self {
        ReportEntry {
            epoch_losses: r.epoch_losses.clone(),
            epoch_heldout_accuracy: r.epoch_heldout_accuracy.clone(),
            final_accuracy: r.final_accuracy,
            wall_clock_secs: r.wall_clock_secs,
        }
    }
}

pub fn write_model(path: &Path, model: &ToyModel, report: &TrainReport) -> Result<()> {
    let alphabet = model.alphabet();
    let file = ModelFile {
        alphabet: alphabet.symbols().iter().map(|c| c.to_string()).collect(),
        eos: alphabet.symbol(alphabet.eos()).to_string(),
        feature_dim: model.feature_dim(),
        params: model.params().to_vec(),
        report: report.into(),
    };
    fs::write(path, serde_json::to_string_pretty(&file)?)
        .with_context(|| format!("writing model {}", path.display()))?;
    Ok(())
}

pub fn read_model(path: &Path) -> Result<ToyModel> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading model {}", path.display()))?;
    let file: ModelFile =
        serde_json::from_str(&text).with_context(|| format!("parsing model {}", path.display()))?;
    let symbols: Vec<char> = file
        .alphabet
        .iter()
        .map(|s| {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Ok(c),
                _ => bail!("alphabet entries must be single characters, got {s:?}"),
            }
        })
        .collect::<Result<_>>()?;
    let eos = file.eos.chars().next().context("empty eos")?;
    let alphabet = Alphabet::new(symbols, eos)?;
    Ok(ToyModel::from_parts(alphabet, file.feature_dim, file.params)?)
}
