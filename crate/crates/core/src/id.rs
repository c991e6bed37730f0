use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! id_newtype {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }
    };
}

id_newtype!(VertexId, "Opaque vertex id; ordered lexicographically.");
id_newtype!(EdgeId, "Opaque edge id; ordered lexicographically.");

/// Join id components into a single synthesized id.
///
/// The separator and backslash are escaped inside components, so the encoding
/// is injective even when user-supplied ids contain the separator.
pub fn encode_parts(parts: &[&str], sep: char) -> String {
    let mut out = String::new();
    for (i, part) in parts.iter().enumerate() {
        if i > 0 {
            out.push(sep);
        }
        for ch in part.chars() {
            if ch == '\\' || ch == sep {
                out.push('\\');
            }
            out.push(ch);
        }
    }
    out
}
