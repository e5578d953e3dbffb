//! Tagged, versioned binary records.
//!
//! Every serializable structure writes one record: a 4-byte magic, a version
//! byte, a little-endian payload length, and the payload itself. Records
//! nest, so a container structure simply concatenates the records of its
//! parts. Round-trips are bit-exact.

use alloc::vec::Vec;
use core::fmt;

/// Error raised while decoding a record stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodecError {
    /// The stream ended before the expected number of bytes.
    Truncated,
    /// A record did not start with the expected magic.
    BadMagic { expected: [u8; 4], found: [u8; 4] },
    /// A record carried an unsupported version.
    BadVersion { magic: [u8; 4], version: u8 },
    /// The payload content was inconsistent.
    Corrupt(&'static str),
}

impl fmt::Display for CodecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodecError::Truncated => write!(f, "record stream truncated"),
            CodecError::BadMagic { expected, found } => write!(
                f,
                "bad record magic: expected {:?}, found {:?}",
                core::str::from_utf8(expected).unwrap_or("????"),
                core::str::from_utf8(found).unwrap_or("????"),
            ),
            CodecError::BadVersion { magic, version } => write!(
                f,
                "record {:?}: unsupported version {}",
                core::str::from_utf8(magic).unwrap_or("????"),
                version
            ),
            CodecError::Corrupt(what) => write!(f, "corrupt record: {}", what),
        }
    }
}

/// Writes one record: magic, version byte, payload length, payload.
pub fn write_record(out: &mut Vec<u8>, magic: [u8; 4], version: u8, payload: &[u8]) {
    out.extend_from_slice(&magic);
    out.push(version);
    out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
    out.extend_from_slice(payload);
}

pub fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

pub fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

pub fn put_i64(out: &mut Vec<u8>, v: i64) {
    out.extend_from_slice(&v.to_le_bytes());
}

pub fn put_u64_slice(out: &mut Vec<u8>, vs: &[u64]) {
    put_u64(out, vs.len() as u64);
    for &v in vs {
        put_u64(out, v);
    }
}

/// Read-side cursor over a byte slice.
#[derive(Debug, Clone)]
pub struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Cursor { buf, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub fn is_empty(&self) -> bool {
        self.remaining() == 0
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8], CodecError> {
        if self.remaining() < n {
            return Err(CodecError::Truncated);
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    pub fn u8(&mut self) -> Result<u8, CodecError> {
        Ok(self.take(1)?[0])
    }

    pub fn u32(&mut self) -> Result<u32, CodecError> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes(b.try_into().unwrap()))
    }

    pub fn u64(&mut self) -> Result<u64, CodecError> {
        let b = self.take(8)?;
        Ok(u64::from_le_bytes(b.try_into().unwrap()))
    }

    pub fn i64(&mut self) -> Result<i64, CodecError> {
        let b = self.take(8)?;
        Ok(i64::from_le_bytes(b.try_into().unwrap()))
    }

    pub fn u64_vec(&mut self) -> Result<Vec<u64>, CodecError> {
        let n = self.u64()? as usize;
        let mut out = Vec::with_capacity(n.min(self.remaining() / 8));
        for _ in 0..n {
            out.push(self.u64()?);
        }
        Ok(out)
    }

    /// Consumes one record with the given magic, checks the version, and
    /// returns a cursor over its payload.
    pub fn record(&mut self, magic: [u8; 4], version: u8) -> Result<Cursor<'a>, CodecError> {
        let found: [u8; 4] = self.take(4)?.try_into().unwrap();
        if found != magic {
            return Err(CodecError::BadMagic {
                expected: magic,
                found,
            });
        }
        let ver = self.u8()?;
        if ver != version {
            return Err(CodecError::BadVersion {
                magic,
                version: ver,
            });
        }
        let len = self.u64()? as usize;
        Ok(Cursor::new(self.take(len)?))
    }
}
