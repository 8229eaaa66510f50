//! Binary strings are plain `u8` slices holding `0` or `1`.

use crate::{Error, Result};

/// Parses an ASCII string of `'0'`/`'1'` characters.
pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.bytes()
        .map(|b| match b {
            b'0' => Ok(0),
            b'1' => Ok(1),
            other => Err(Error::InvalidBits(format!(
                "unexpected character {:?}",
                other as char
            ))),
        })
        .collect()
}

pub fn format_bits(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}
