//! Name-keyed registries of interchangeable implementations.
//!
//! Every family of variants in the crate (potential and source profiles,
//! worst-case observability searches, minimizers, experiment presets) is
//! exposed as a trait object and registered under a stable name. Selectors
//! have the form `name` or `name:argument`; the argument string is handed
//! to the registered constructor untouched.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Constructor<T> = fn(Option<&str>) -> Result<Arc<T>>;

struct Entry<T: ?Sized> {
    summary: &'static str,
    build: Constructor<T>,
}

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<&'static str, Entry<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: BTreeMap::new(),
        }
    }

    /// Registers `build` under `name`, replacing any previous entry.
    pub fn register(&mut self, name: &'static str, summary: &'static str, build: Constructor<T>) {
        self.entries.insert(name, Entry { summary, build });
    }

    pub fn with(
        mut self,
        name: &'static str,
        summary: &'static str,
        build: Constructor<T>,
    ) -> Self {
        self.register(name, summary, build);
        self
    }

    pub fn kind(&self) -> &'static str {
        self.kind
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn describe(&self) -> Vec<(&'static str, &'static str)> {
        self.entries.iter().map(|(k, e)| (*k, e.summary)).collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    /// Resolves a `name[:arg]` selector.
    pub fn build(&self, selector: &str) -> Result<Arc<T>> {
        let selector = selector.trim();
        let (name, arg) = match selector.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (selector, None),
        };
        match self.entries.get(name) {
            Some(entry) => (entry.build)(arg),
            None => Err(Error::UnknownName {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().collect::<Vec<_>>().join(", "),
            }),
        }
    }
}

pub(crate) fn parse_f64_arg(kind: &str, arg: Option<&str>) -> Result<f64> {
    let raw = arg.ok_or_else(|| Error::invalid(format!("{kind} requires a numeric argument")))?;
    raw.parse::<f64>()
        .map_err(|_| Error::invalid(format!("{kind}: cannot parse '{raw}' as a number")))
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Named: Send + Sync {
        fn label(&self) -> String;
    }

    struct Fixed(String);

    impl Named for Fixed {
        fn label(&self) -> String {
            self.0.clone()
        }
    }

    fn fixed(arg: Option<&str>) -> Result<Arc<dyn Named>> {
        Ok(Arc::new(Fixed(arg.unwrap_or("none").to_string())))
    }

    #[test]
    fn selector_argument_is_forwarded() {
        let reg: Registry<dyn Named> = Registry::new("thing").with("fixed", "test entry", fixed);
        assert_eq!(reg.build("fixed").unwrap().label(), "none");
        assert_eq!(reg.build("fixed: 2.5 ").unwrap().label(), "2.5");
    }

    #[test]
    fn unknown_name_lists_alternatives() {
        let reg: Registry<dyn Named> = Registry::new("thing").with("fixed", "test entry", fixed);
        let err = reg.build("missing").err().unwrap().to_string();
        assert!(err.contains("unknown thing 'missing'"));
        assert!(err.contains("fixed"));
    }
}
