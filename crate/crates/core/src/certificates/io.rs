use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Certificate, CertificateError, CertificateSpec};

/// Version of the certificate JSON layout.
pub const CERTIFICATE_SCHEMA: u32 = 1;

/// On-disk certificate: the spec header, the source graph's hash, and the
/// body as `[bin, multiplicity]` runs, where value = bin × `spec.bin_width`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema: u32,
    pub spec: CertificateSpec,
    pub graph_hash: Option<String>,
    pub length: u64,
    pub runs: Vec<(i64, u64)>,
}

impl Certificate {
    pub fn to_file(&self) -> CertificateFile {
        CertificateFile {
            schema: CERTIFICATE_SCHEMA,
            spec: self.spec,
            graph_hash: self.graph_hash.clone(),
            length: self.len,
            runs: self.runs.clone(),
        }
    }

    pub fn from_file(file: CertificateFile) -> Result<Self, CertificateError> {
        if file.schema != CERTIFICATE_SCHEMA {
            return Err(CertificateError::Malformed(format!("unsupported schema {}", file.schema)));
        }
        file.spec.validate()?;
        let mut cert = Certificate::from_runs(file.spec, file.runs)?;
        if cert.len != file.length {
            return Err(CertificateError::Malformed(format!(
                "length field {} does not match the runs ({})",
                file.length, cert.len
            )));
        }
        cert.graph_hash = file.graph_hash;
        Ok(cert)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(&self.to_file()).expect("certificate serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CertificateError> {
        Certificate::from_file(serde_json::from_str(text)?)
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<(), CertificateError> {
        out.write_all(self.to_json().as_bytes())?;
        Ok(())
    }

    pub fn read_json<R: Read>(mut input: R) -> Result<Self, CertificateError> {
        let mut text = String::new();
        input.read_to_string(&mut text)?;
        Certificate::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), CertificateError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CertificateError> {
        Certificate::from_json(&std::fs::read_to_string(path)?)
    }

    /// `value,multiplicity` rows, values printed to the bin resolution.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CertificateError> {
        let digits = (-self.spec.bin_width.log10()).ceil().max(0.0) as usize;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["value", "multiplicity"])?;
        for (v, c) in self.value_runs() {
            w.write_record([format!("{v:.digits$}"), c.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}
