//! Named collections of interchangeable strategies, selected at run time.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {kind} {name:?} (available: {})", available.join(", "))]
pub struct UnknownEntry {
    pub kind: &'static str,
    pub name: String,
    pub available: Vec<&'static str>,
}

/// Something with a stable registry name.
pub trait Named {
    fn name(&self) -> &'static str;
}

/// Ordered name → strategy table. Registration order is preserved.
pub struct Registry<T: ?Sized + Named> {
    kind: &'static str,
    entries: Vec<Box<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry {
            kind,
            entries: Vec::new(),
        }
    }

    /// Adds or replaces the entry with the same name.
    pub fn register(&mut self, entry: Box<T>) -> &mut Self {
        match self.entries.iter().position(|e| e.name() == entry.name()) {
            Some(i) => self.entries[i] = entry,
            None => self.entries.push(entry),
        }
        self
    }

    pub fn with(mut self, entry: Box<T>) -> Self {
        self.register(entry);
        self
    }

    pub fn get(&self, name: &str) -> Result<&T, UnknownEntry> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| UnknownEntry {
                kind: self.kind,
                name: name.to_string(),
                available: self.names(),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|e| e.as_ref())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
