//! Machine-readable pass/fail records for every verification.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Parameters a certificate depends on; `ell` and `D` are absent for checks
/// that involve no Verma module.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub ell: Option<i32>,
    pub r: usize,
    #[serde(rename = "D")]
    pub depth: Option<usize>,
    #[serde(rename = "Q")]
    pub q: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub check: String,
    pub params: Params,
    pub status: Status,
    pub witness: Value,
    /// Wall-clock time; zero unless timing was requested, so reruns are byte-identical.
    pub elapsed_ms: u64,
}

impl Certificate {
    pub fn new(check: &str, params: Params, passed: bool, witness: Value) -> Self {
        Certificate {
            check: check.to_string(),
            params,
            status: if passed { Status::Pass } else { Status::Fail },
            witness,
            elapsed_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Run `f` and record its wall-clock time on the certificate it returns.
pub fn timed<E>(f: impl FnOnce() -> Result<Certificate, E>) -> Result<Certificate, E> {
    let start = std::time::Instant::now();
    let mut cert = f()?;
    cert.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema() {
        let params = Params { ell: Some(1), r: 2, depth: None, q: "i".into() };
        let c = Certificate::new("x", params, true, serde_json::json!({"dimension": 6}));
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(
            text,
            r#"{"check":"x","params":{"ell":1,"r":2,"D":null,"Q":"i"},"status":"pass","witness":{"dimension":6},"elapsed_ms":0}"#
        );
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }
}
