//! PKML segment cache files.
//!
//! Layout, all little-endian: magic `PKML`, `u32` version (1), `u64` base,
//! `u64` count, then `count` `u32` prime-base codes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::sieve::{base_primes_for, sieve_segment_with, Segment, SieveConfig};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"PKML";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 8 + 8;

pub fn encode(segment: &Segment) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * segment.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&segment.base().to_le_bytes());
    out.extend_from_slice(&(segment.len() as u64).to_le_bytes());
    for &c in segment.codes() {
        out.extend_from_slice(&c.to_le_bytes());
    }
    out
}

pub fn decode(bytes: &[u8]) -> std::result::Result<Segment, String> {
    if bytes.len() < HEADER_LEN {
        return Err(format!(
            "file is {} bytes, shorter than the header",
            bytes.len()
        ));
    }
    if &bytes[0..4] != MAGIC {
        return Err("bad magic".into());
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(format!("unsupported version {version}"));
    }
    let base = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let count = u64::from_le_bytes(bytes[16..24].try_into().unwrap());
    let body = &bytes[HEADER_LEN..];
    if Some(body.len() as u64) != count.checked_mul(4) {
        return Err(format!(
            "count {count} does not match payload of {} bytes",
            body.len()
        ));
    }
    let codes = body
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(Segment::from_parts(base, codes))
}

pub fn segment_file_name(base: u64, length: usize) -> String {
    format!("seg-{length}-{base:020}.pkml")
}

pub fn write_segment(path: &Path, segment: &Segment) -> Result<()> {
    let tmp = path.with_extension("pkml.tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&encode(segment))?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_segment(path: &Path) -> Result<Segment> {
    let bytes = fs::read(path)?;
    decode(&bytes).map_err(|reason| Error::CorruptCache {
        path: path.to_path_buf(),
        reason,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Loaded,
    Written,
    Regenerated,
}

/// Loads the segment at `base` from `dir`, sieving (and writing) it when the
/// file is absent or unusable.
pub(crate) fn load_or_sieve(
    dir: &Path,
    base: u64,
    length: usize,
    primes: &[u32],
) -> Result<(Segment, Outcome)> {
    let path = dir.join(segment_file_name(base, length));
    let mut outcome = Outcome::Written;
    if path.exists() {
        match read_segment(&path) {
            Ok(seg) if seg.base() == base && seg.len() == length => {
                return Ok((seg, Outcome::Loaded));
            }
            Ok(seg) => {
                log::warn!(
                    "cache file {} holds base {} / {} entries, expected {base} / {length}; regenerating",
                    path.display(),
                    seg.base(),
                    seg.len()
                );
            }
            Err(Error::CorruptCache { reason, .. }) => {
                log::warn!(
                    "cache file {} is corrupt ({reason}); regenerating",
                    path.display()
                );
            }
            Err(e) => return Err(e),
        }
        outcome = Outcome::Regenerated;
    }
    let seg = sieve_segment_with(base, length, primes)?;
    write_segment(&path, &seg)?;
    Ok((seg, outcome))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub written: usize,
    pub regenerated: usize,
    pub skipped: usize,
}

/// Segment bases `1, 1+L, 1+2L, …` needed to cover `[1, limit]`.
pub fn segment_bases(limit: u64, length: usize) -> Vec<u64> {
    let count = limit.div_ceil(length as u64).max(1);
    (0..count).map(|i| 1 + i * length as u64).collect()
}

/// Makes sure `config.cache_dir` holds valid segment files covering `[1, limit]`.
pub fn sync_cache(limit: u64, config: &SieveConfig) -> Result<CacheStats> {
    config.validate()?;
    let dir: PathBuf = config
        .cache_dir
        .clone()
        .ok_or_else(|| Error::Parameter("no cache directory configured".into()))?;
    fs::create_dir_all(&dir)?;
    let bases = segment_bases(limit, config.segment_length);
    let end = bases.last().unwrap() + config.segment_length as u64;
    let primes = base_primes_for(end);
    let outcomes: Vec<Outcome> = bases
        .par_iter()
        .map(|&b| load_or_sieve(&dir, b, config.segment_length, &primes).map(|(_, o)| o))
        .collect::<Result<_>>()?;
    let mut stats = CacheStats::default();
    for o in outcomes {
        match o {
            Outcome::Loaded => stats.skipped += 1,
            Outcome::Written => stats.written += 1,
            Outcome::Regenerated => stats.regenerated += 1,
        }
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve::sieve_segment;

    #[test]
    fn header_layout() {
        let seg = sieve_segment(2, 9).unwrap();
        let bytes = encode(&seg);
        assert_eq!(&bytes[..4], b"PKML");
        assert_eq!(&bytes[4..8], &[1, 0, 0, 0]);
        assert_eq!(u64::from_le_bytes(bytes[8..16].try_into().unwrap()), 2);
        assert_eq!(u64::from_le_bytes(bytes[16..24].try_into().unwrap()), 9);
        assert_eq!(&bytes[24..28], &2u32.to_le_bytes());
        assert_eq!(bytes.len(), 24 + 36);
        assert_eq!(decode(&bytes).unwrap(), seg);
    }

    #[test]
    fn rejects_bad_files() {
        let seg = sieve_segment(1, 16).unwrap();
        let good = encode(&seg);
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(decode(&bad).unwrap_err().contains("magic"));
        let mut bad = good.clone();
        bad[4] = 2;
        assert!(decode(&bad).unwrap_err().contains("version"));
        assert!(decode(&good[..good.len() - 1]).is_err());
        assert!(decode(&good[..10]).is_err());
    }

    #[test]
    fn bases_cover_limit() {
        assert_eq!(segment_bases(1 << 20, 1 << 20), vec![1]);
        assert_eq!(segment_bases(10_000_000, 1 << 20).len(), 10);
        assert_eq!(segment_bases(2049, 1024), vec![1, 1025, 2049]);
    }
}
