//! On-disk copy of the character memo table.
//!
//! Enabled by pointing `HYPERCOUNT_CACHE_DIR` at a directory. The file is a
//! sorted dump: magic, format version, entry count, then per entry the two
//! partitions (length-prefixed `u32` parts) and the value as length-prefixed
//! little-endian two's-complement bytes. All integers are little-endian.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;

use hypercount::character::CharacterTable;
use hypercount::Partition;

pub const ENV_VAR: &str = "HYPERCOUNT_CACHE_DIR";
pub const MAGIC: &[u8; 8] = b"HCCHITBL";
pub const VERSION: u32 = 1;
const FILE_NAME: &str = "chi-v1.bin";

pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(ENV_VAR)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

pub fn cache_file(dir: &Path) -> PathBuf {
    dir.join(FILE_NAME)
}

fn put_u32(buf: &mut Vec<u8>, v: u32) {
    buf.extend_from_slice(&v.to_le_bytes());
}

fn put_partition(buf: &mut Vec<u8>, p: &Partition) {
    put_u32(buf, p.len() as u32);
    for &x in p.parts() {
        put_u32(buf, x as u32);
    }
}

pub fn encode(entries: &[(Partition, Partition, BigInt)]) -> Vec<u8> {
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    put_u32(&mut buf, VERSION);
    buf.extend_from_slice(&(entries.len() as u64).to_le_bytes());
    for (lam, mu, value) in entries {
        put_partition(&mut buf, lam);
        put_partition(&mut buf, mu);
        let bytes = value.to_signed_bytes_le();
        put_u32(&mut buf, bytes.len() as u32);
        buf.extend_from_slice(&bytes);
    }
    buf
}

fn bad(msg: &str) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.to_string())
}

struct Reader<'a>(&'a [u8]);

impl Reader<'_> {
    fn take(&mut self, n: usize) -> io::Result<&[u8]> {
        if self.0.len() < n {
            return Err(bad("truncated cache file"));
        }
        let (head, rest) = self.0.split_at(n);
        self.0 = rest;
        Ok(head)
    }

    fn u32(&mut self) -> io::Result<u32> {
        let mut b = [0u8; 4];
        self.take(4)?.read_exact(&mut b)?;
        Ok(u32::from_le_bytes(b))
    }

    fn partition(&mut self) -> io::Result<Partition> {
        let len = self.u32()? as usize;
        let parts = (0..len)
            .map(|_| self.u32().map(|x| x as usize))
            .collect::<io::Result<Vec<_>>>()?;
        Partition::new(parts).map_err(|e| bad(&e.to_string()))
    }
}

pub fn decode(bytes: &[u8]) -> io::Result<Vec<(Partition, Partition, BigInt)>> {
    let mut r = Reader(bytes);
    if r.take(MAGIC.len())? != MAGIC {
        return Err(bad("not a character cache"));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(bad(&format!(
            "cache format version {version}, expected {VERSION}"
        )));
    }
    let mut count = [0u8; 8];
    r.take(8)?.read_exact(&mut count)?;
    let count = u64::from_le_bytes(count);
    let mut out = Vec::new();
    for _ in 0..count {
        let lam = r.partition()?;
        let mu = r.partition()?;
        let len = r.u32()? as usize;
        let value = BigInt::from_signed_bytes_le(r.take(len)?);
        if lam.size() != mu.size() {
            return Err(bad("entry with mismatched sizes"));
        }
        out.push((lam, mu, value));
    }
    if !r.0.is_empty() {
        return Err(bad("trailing bytes in cache file"));
    }
    Ok(out)
}

/// Seeds the global table from the cache directory, if a cache file exists.
pub fn load(dir: &Path) -> io::Result<()> {
    let path = cache_file(dir);
    if !path.exists() {
        return Ok(());
    }
    let entries = decode(&fs::read(&path)?)?;
    CharacterTable::global().extend(entries);
    Ok(())
}

/// Writes the global table to the cache directory atomically.
pub fn store(dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let bytes = encode(&CharacterTable::global().entries());
    let tmp = dir.join(format!("{FILE_NAME}.{}.tmp", std::process::id()));
    fs::write(&tmp, bytes)?;
    fs::rename(tmp, cache_file(dir))
}
