use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

/// Machine-readable result of one command. Verdicts and counters are exact;
/// `details` carries structured payloads such as representatives or
/// witnesses.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub verdicts: BTreeMap<String, bool>,
    pub counters: BTreeMap<String, i64>,
    pub generator_words: Vec<String>,
    pub timing_ms: u64,
    pub details: serde_json::Value,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            counters: BTreeMap::new(),
            generator_words: Vec::new(),
            timing_ms: 0,
            details: serde_json::Value::Null,
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn verdict(&mut self, key: &str, value: bool) -> &mut Self {
        self.verdicts.insert(key.to_string(), value);
        self
    }

    pub fn counter(&mut self, key: &str, value: impl TryInto<i64>) -> &mut Self {
        self.counters
            .insert(key.to_string(), value.try_into().unwrap_or(i64::MAX));
        self
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        if !self.details.is_object() {
            self.details = serde_json::Value::Object(Default::default());
        }
        let value = serde_json::to_value(value).expect("report payloads serialize");
        self.details
            .as_object_mut()
            .expect("just made an object")
            .insert(key.to_string(), value);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Two-column text table of inputs, verdicts, counters and words.
    pub fn to_table(&self) -> String {
        let mut rows: Vec<(String, String)> = vec![("command".into(), self.command.clone())];
        rows.extend(self.inputs.iter().map(|(k, v)| (format!("input.{k}"), v.clone())));
        rows.extend(self.verdicts.iter().map(|(k, v)| (k.clone(), v.to_string())));
        rows.extend(self.counters.iter().map(|(k, v)| (k.clone(), v.to_string())));
        rows.extend(
            self.generator_words
                .iter()
                .enumerate()
                .map(|(i, w)| (format!("word[{i}]"), w.clone())),
        );
        rows.push(("timing_ms".into(), self.timing_ms.to_string()));
        let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_lists_every_field() {
        let mut r = RunReport::new("delta");
        r.input("factor", "builtin:D").verdict("ok", true).counter("edges", 54usize);
        let t = r.to_table();
        assert!(t.contains("input.factor"));
        assert!(t.contains("edges"));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["counters"]["edges"], 54);
    }
}
