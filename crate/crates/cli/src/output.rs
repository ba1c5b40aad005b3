use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use twinreg::kvconfig::KvConfig;

use crate::error::{input, CliResult};

pub const MANIFEST: &str = "manifest.txt";

/// Directory receiving the artifacts of one run.
pub struct OutputDir {
    dir: PathBuf,
}

impl OutputDir {
    pub fn create(dir: &Path) -> CliResult<Self> {
        std::fs::create_dir_all(dir).map_err(|e| input(format!("{}: {e}", dir.display())))?;
        Ok(Self { dir: dir.to_path_buf() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn file(&self, name: &str) -> CliResult<BufWriter<File>> {
        let p = self.path(name);
        File::create(&p).map(BufWriter::new).map_err(|e| input(format!("{}: {e}", p.display())))
    }

    pub fn csv(&self, name: &str) -> CliResult<csv::Writer<BufWriter<File>>> {
        Ok(csv::Writer::from_writer(self.file(name)?))
    }

    pub fn text(&self, name: &str, content: &str) -> CliResult<()> {
        let p = self.path(name);
        std::fs::write(&p, content).map_err(|e| input(format!("{}: {e}", p.display())))
    }

    pub fn manifest(&self, kv: &KvConfig) -> CliResult<()> {
        self.text(MANIFEST, &kv.render())
    }

    pub fn report(&self, name: &str, report: &twinreg::metrics::SelectionReport) -> CliResult<()> {
        report.write_csv(self.file(name)?)?;
        Ok(())
    }
}
