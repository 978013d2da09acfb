//! Arrangement documents shipped with the library.

use crate::document::ArrangementDocument;
use crate::error::{Error, Result};

macro_rules! corpus {
    ($($name:literal),* $(,)?) => {
        /// `(name, canonical JSON)` for every bundled document.
        pub const CORPUS: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../corpus/", $name, ".json"))),)*
        ];
    };
}

corpus!(
    "a2",
    "a2_511",
    "b2_lines",
    "remark_f2",
    "braid",
    "generic4",
    "boolean",
    "braid_decone",
    "b2_deform_1",
    "b2_deform_2",
    "b2_deform_3",
);

pub fn names() -> impl Iterator<Item = &'static str> {
    CORPUS.iter().map(|(n, _)| *n)
}

pub fn load(name: &str) -> Result<ArrangementDocument> {
    let (_, text) = CORPUS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Parse(format!("no bundled document named {name:?}")))?;
    ArrangementDocument::parse(text)
}

pub fn all() -> Result<Vec<(&'static str, ArrangementDocument)>> {
    CORPUS
        .iter()
        .map(|(n, t)| ArrangementDocument::parse(t).map(|d| (*n, d)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_documents_are_canonical() {
        for (name, text) in CORPUS {
            let doc = ArrangementDocument::parse(text).unwrap();
            assert_eq!(doc.to_canonical_json(), *text, "{name}");
        }
        assert!(load("nope").is_err());
    }
}
