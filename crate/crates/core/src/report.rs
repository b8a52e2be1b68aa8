//! Structured run reports: ordered key/value text by default, the same data
//! as JSON on request.

use std::fmt::Display;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Process exit status shared by every subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    True,
    False,
    Violation,
    Unknown,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::True => 0,
            Status::False | Status::Violation => 1,
            Status::Error => 2,
            Status::Unknown => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::True => "true",
            Status::False => "false",
            Status::Violation => "violation",
            Status::Unknown => "unknown",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub key: String,
    #[serde(skip)]
    pub text: String,
    pub value: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub status: Status,
    pub exit_code: i32,
    pub entries: Vec<Entry>,
    pub elapsed_us: u64,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            inputs_digest: digest(&[]),
            seed: None,
            status: Status::Ok,
            exit_code: 0,
            entries: vec![],
            elapsed_us: 0,
        }
    }

    pub fn set_status(&mut self, status: Status) {
        self.status = status;
        self.exit_code = status.exit_code();
    }

    /// Appends an entry shown with `Display` in text and serialized in JSON.
    pub fn push<T: Display + Serialize + ?Sized>(&mut self, key: &str, value: &T) {
        self.entries.push(Entry {
            key: key.to_string(),
            text: value.to_string(),
            value: serde_json::to_value(value).unwrap_or(Value::Null),
        });
    }

    /// Appends an entry whose text and JSON forms are given separately.
    pub fn push_with<T: Serialize + ?Sized>(&mut self, key: &str, text: impl Into<String>, value: &T) {
        self.entries.push(Entry {
            key: key.to_string(),
            text: text.into(),
            value: serde_json::to_value(value).unwrap_or(Value::Null),
        });
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\ninputs-digest: {}\n", self.command, self.inputs_digest);
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed: {seed}\n"));
        }
        out.push_str(&format!("status: {}\nexit-code: {}\n", self.status.as_str(), self.exit_code));
        for e in &self.entries {
            out.push_str(&format!("{}: {}\n", e.key, e.text));
        }
        out.push_str(&format!("elapsed-us: {}\n", self.elapsed_us));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// SHA-256 over `(role, contents)` pairs in order, hex encoded.
pub fn digest(inputs: &[(&str, &[u8])]) -> String {
    let mut h = Sha256::new();
    for (role, bytes) in inputs {
        h.update((role.len() as u64).to_le_bytes());
        h.update(role.as_bytes());
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    hex::encode(h.finalize())
}
