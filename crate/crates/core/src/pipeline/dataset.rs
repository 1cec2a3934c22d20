use std::fs;
use std::path::{Path, PathBuf};

use log::warn;

use super::PipelineError;
use crate::raster::{read_pgm, GrayImage};

/// One glyph image of the dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// `<class dir>/<file name>`.
    pub id: String,
    pub label: usize,
    pub label_name: String,
    pub path: PathBuf,
    pub image: GrayImage,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedFile {
    pub path: PathBuf,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// Class names, index = label.
    pub classes: Vec<String>,
    pub samples: Vec<Sample>,
    pub skipped: Vec<SkippedFile>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io { path: path.to_path_buf(), source }
}

/// Reads a grayscale image; PGM goes through the built-in decoder, other
/// formats through the `image` crate.
pub fn load_gray(path: &Path) -> Result<GrayImage, PipelineError> {
    let unreadable = |reason: String| PipelineError::UnreadableImage { path: path.to_path_buf(), reason };
    let is_pgm = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
    if is_pgm {
        return read_pgm(path).map_err(|e| unreadable(e.to_string()));
    }
    let img = image::open(path).map_err(|e| unreadable(e.to_string()))?.to_luma8();
    let (w, h) = img.dimensions();
    GrayImage::new(w as usize, h as usize, img.into_raw()).map_err(|e| unreadable(e.to_string()))
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>, PipelineError> {
    let mut entries = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(io_err(dir))?;
    entries.retain(|p| !p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with('.')));
    entries.sort();
    Ok(entries)
}

/// Loads `root/<class>/<image>`; classes are numbered by sorted directory
/// name and samples ordered by class, then file name. Unreadable images
/// are skipped with a warning and listed in [`Dataset::skipped`].
pub fn load_dataset(root: impl AsRef<Path>) -> Result<Dataset, PipelineError> {
    let root = root.as_ref();
    let class_dirs: Vec<PathBuf> = sorted_entries(root)?.into_iter().filter(|p| p.is_dir()).collect();
    let mut classes = Vec::with_capacity(class_dirs.len());
    let mut samples = Vec::new();
    let mut skipped = Vec::new();

    for (label, dir) in class_dirs.iter().enumerate() {
        let label_name = dir.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        for path in sorted_entries(dir)?.into_iter().filter(|p| p.is_file()) {
            match load_gray(&path) {
                Ok(image) => {
                    let file = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                    samples.push(Sample {
                        id: format!("{label_name}/{file}"),
                        label,
                        label_name: label_name.clone(),
                        path,
                        image,
                    });
                }
                Err(e) => {
                    warn!("skipping {}: {e}", path.display());
                    skipped.push(SkippedFile { path, reason: e.to_string() });
                }
            }
        }
        classes.push(label_name);
    }

    if samples.is_empty() {
        return Err(PipelineError::EmptyDataset);
    }
    Ok(Dataset { classes, samples, skipped })
}
