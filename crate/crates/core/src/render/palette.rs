use std::collections::BTreeMap;
use std::str::FromStr;

use super::RenderError;

/// Map from payload codes to RGB colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Palette {
    colors: BTreeMap<u8, [u8; 3]>,
}

impl Palette {
    pub fn new(colors: BTreeMap<u8, [u8; 3]>) -> Self {
        Self { colors }
    }

    pub fn get(&self, code: u8) -> Option<[u8; 3]> {
        self.colors.get(&code).copied()
    }

    /// Green, red and blue basins with light bands on odd entry times.
    pub fn basins() -> Self {
        Self::from_pairs(&[
            (0, [0, 0, 0]),
            (1, [0, 160, 60]),
            (2, [200, 30, 30]),
            (3, [30, 60, 200]),
            (4, [220, 245, 225]),
            (5, [250, 225, 225]),
            (6, [225, 230, 250]),
            (7, [128, 128, 128]),
        ])
    }

    pub fn partition() -> Self {
        Self::from_pairs(&[
            (0, [240, 200, 40]),
            (1, [0, 160, 60]),
            (2, [200, 30, 30]),
            (3, [30, 60, 200]),
            (4, [255, 255, 255]),
            (5, [0, 0, 0]),
        ])
    }

    fn from_pairs(p: &[(u8, [u8; 3])]) -> Self {
        Self {
            colors: p.iter().copied().collect(),
        }
    }

    /// Dense lookup for the given codes, failing on the first missing one.
    pub(super) fn lookup_table(
        &self,
        codes: impl Iterator<Item = u8>,
    ) -> Result<[Option<[u8; 3]>; 256], RenderError> {
        let mut table = [None; 256];
        for c in codes {
            table[c as usize] = Some(self.get(c).ok_or(RenderError::MissingCode(c))?);
        }
        Ok(table)
    }

    pub fn to_text(&self) -> String {
        self.colors
            .iter()
            .map(|(c, [r, g, b])| format!("{c} {r} {g} {b}\n"))
            .collect()
    }
}

impl FromStr for Palette {
    type Err = RenderError;

    /// Lines `code r g b`; blank lines and `#` comments are skipped.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut colors = BTreeMap::new();
        for (n, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: Vec<u8> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|e| RenderError::PaletteParse { line: n + 1, msg: format!("{e}") })?;
            let [code, r, g, b] = v[..] else {
                return Err(RenderError::PaletteParse {
                    line: n + 1,
                    msg: "expected `code r g b`".into(),
                });
            };
            colors.insert(code, [r, g, b]);
        }
        Ok(Self { colors })
    }
}
