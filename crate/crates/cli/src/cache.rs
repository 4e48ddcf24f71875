//! Constant memo snapshot kept as `atoms.txt` under `--cache-dir`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use eulersum::constants::{memo_load, memo_snapshot};
use eulersum::Error;

const FILE_NAME: &str = "atoms.txt";

fn file(dir: &Path) -> PathBuf {
    dir.join(FILE_NAME)
}

fn io_error(path: &Path, e: io::Error) -> Error {
    Error::InvalidParameter(format!("cache {}: {e}", path.display()))
}

pub fn load(dir: &Path) -> Result<usize, Error> {
    let path = file(dir);
    match fs::read_to_string(&path) {
        Ok(text) => memo_load(text.lines()),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(0),
        Err(e) => Err(io_error(&path, e)),
    }
}

pub fn save(dir: &Path) -> Result<(), Error> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let path = file(dir);
    let mut text = memo_snapshot().join("\n");
    text.push('\n');
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text).map_err(|e| io_error(&tmp, e))?;
    fs::rename(&tmp, &path).map_err(|e| io_error(&path, e))
}
