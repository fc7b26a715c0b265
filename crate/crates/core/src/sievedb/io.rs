//! Database files.
//!
//! Binary layout (little endian):
//!
//! ```text
//! "PCFSVDB\0"  u32 version  u32 meta_len  meta bytes
//! u32 nprimes  u32 prime * nprimes
//! per prime:   u32 p  u32 nrecords
//!   per record: u16 b  u16 c  u8 ncrit
//!     per point: u16 point (p = infinity)  u8 nper  u64 period * nper
//! "PCFSVEND"
//! ```
//!
//! The text dump carries the same content, one record per line:
//! `p b c point:{periods} point:{periods}`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::db::{validate_primes, DbEntry, Database, PrimeTable};
use crate::error::{Error, Result};
use crate::ffdyn::{FpPoint, PeriodSet};

const MAGIC: &[u8; 8] = b"PCFSVDB\0";
const TRAILER: &[u8; 8] = b"PCFSVEND";
const TEXT_MAGIC: &str = "PCFSVDB-TEXT";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DbFileFormat {
    Binary,
    Text,
}

fn fmt_err(msg: impl Into<String>) -> Error {
    Error::DbFormat(msg.into())
}

impl Database {
    pub fn write_to(&self, w: &mut impl Write, format: DbFileFormat) -> Result<()> {
        match format {
            DbFileFormat::Binary => self.write_binary(w),
            DbFileFormat::Text => self.write_text(w),
        }
    }

    /// Writes through a temporary sibling and renames, so a crash never
    /// leaves a partial file at `path`.
    pub fn save(&self, path: &Path, format: DbFileFormat) -> Result<()> {
        let tmp = path.with_extension("partial");
        {
            let mut w = BufWriter::new(File::create(&tmp)?);
            self.write_to(&mut w, format)?;
            w.flush()?;
            w.get_ref().sync_all()?;
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Reads either format, detected from the first bytes.
    pub fn load(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        Self::read_from(&mut r)
    }

    pub fn read_from(r: &mut impl BufRead) -> Result<Self> {
        let head = r.fill_buf()?;
        if head.starts_with(MAGIC) {
            Self::read_binary(r)
        } else if head.starts_with(TEXT_MAGIC.as_bytes()) {
            Self::read_text(r)
        } else {
            Err(fmt_err("unrecognized header"))
        }
    }

    fn write_binary(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&(self.meta.len() as u32).to_le_bytes())?;
        w.write_all(self.meta.as_bytes())?;
        w.write_all(&(self.tables.len() as u32).to_le_bytes())?;
        for t in &self.tables {
            w.write_all(&t.p.to_le_bytes())?;
        }
        for t in &self.tables {
            let recs: Vec<_> = t.records().collect();
            w.write_all(&t.p.to_le_bytes())?;
            w.write_all(&(recs.len() as u32).to_le_bytes())?;
            for (b, c, e) in recs {
                w.write_all(&(b as u16).to_le_bytes())?;
                w.write_all(&(c as u16).to_le_bytes())?;
                w.write_all(&[2u8])?;
                for i in 0..2 {
                    w.write_all(&(e.points[i].code(t.p) as u16).to_le_bytes())?;
                    let ps = e.periods[i].as_slice();
                    w.write_all(&[ps.len() as u8])?;
                    for &n in ps {
                        w.write_all(&n.to_le_bytes())?;
                    }
                }
            }
        }
        w.write_all(TRAILER)?;
        Ok(())
    }

    fn read_binary(r: &mut impl Read) -> Result<Self> {
        let mut rd = Reader { r };
        let magic: [u8; 8] = rd.array()?;
        if &magic != MAGIC {
            return Err(fmt_err("bad magic"));
        }
        let version = rd.u32()?;
        if version != FORMAT_VERSION {
            return Err(fmt_err(format!("unsupported version {version}")));
        }
        let meta_len = rd.u32()? as usize;
        let mut meta = vec![0u8; meta_len];
        rd.r.read_exact(&mut meta).map_err(truncated)?;
        let meta = String::from_utf8(meta).map_err(|_| fmt_err("metadata is not UTF-8"))?;
        let n = rd.u32()? as usize;
        let primes: Vec<u32> = (0..n).map(|_| rd.u32()).collect::<Result<_>>()?;
        check_header_primes(&primes)?;
        let mut tables = Vec::with_capacity(n);
        for &p in &primes {
            if rd.u32()? != p {
                return Err(fmt_err(format!("block for {p} out of order")));
            }
            let nrec = rd.u32()?;
            let mut t = PrimeTable::empty(p);
            for _ in 0..nrec {
                let b = rd.u16()? as u32;
                let c = rd.u16()? as u32;
                let ncrit = rd.u8()?;
                if ncrit != 2 {
                    return Err(fmt_err(format!("record ({b}, {c}) mod {p} has {ncrit} critical points")));
                }
                let mut points = [FpPoint::Infinity; 2];
                let mut periods = [PeriodSet::single(1); 2];
                for i in 0..2 {
                    let code = rd.u16()? as u32;
                    if code > p {
                        return Err(fmt_err(format!("point {code} out of range mod {p}")));
                    }
                    points[i] = FpPoint::from_code(code, p);
                    let nper = rd.u8()? as usize;
                    let v: Vec<u64> = (0..nper).map(|_| rd.u64()).collect::<Result<_>>()?;
                    periods[i] = PeriodSet::from_slice(&v).ok_or_else(|| fmt_err("bad period set size"))?;
                }
                insert(&mut t, b, c, DbEntry { points, periods })?;
            }
            tables.push(t);
        }
        let trailer: [u8; 8] = rd.array()?;
        if &trailer != TRAILER {
            return Err(fmt_err("missing trailer (truncated file?)"));
        }
        Ok(Database { tables, meta })
    }

    fn write_text(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "{TEXT_MAGIC} {FORMAT_VERSION}")?;
        writeln!(w, "meta {}", self.meta.replace('\n', " "))?;
        let ps: Vec<String> = self.tables.iter().map(|t| t.p.to_string()).collect();
        writeln!(w, "primes {}", ps.join(" "))?;
        for t in &self.tables {
            for (b, c, e) in t.records() {
                writeln!(
                    w,
                    "{} {b} {c} {}:{} {}:{}",
                    t.p, e.points[0], e.periods[0], e.points[1], e.periods[1]
                )?;
            }
        }
        writeln!(w, "end")?;
        Ok(())
    }

    fn read_text(r: &mut impl BufRead) -> Result<Self> {
        let mut lines = r.lines();
        let mut next = || -> Result<String> {
            lines.next().ok_or_else(|| fmt_err("unexpected end of text dump"))?.map_err(Error::from)
        };
        let head = next()?;
        if head != format!("{TEXT_MAGIC} {FORMAT_VERSION}") {
            return Err(fmt_err(format!("bad text header {head:?}")));
        }
        let meta = next()?
            .strip_prefix("meta")
            .ok_or_else(|| fmt_err("missing meta line"))?
            .trim_start()
            .to_string();
        let pl = next()?;
        let primes: Vec<u32> = pl
            .strip_prefix("primes")
            .ok_or_else(|| fmt_err("missing primes line"))?
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| fmt_err(format!("bad prime {s:?}"))))
            .collect::<Result<_>>()?;
        check_header_primes(&primes)?;
        let mut tables: Vec<PrimeTable> = primes.iter().map(|&p| PrimeTable::empty(p)).collect();
        loop {
            let line = next()?;
            if line == "end" {
                break;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [p, b, c, x, y] = parts[..] else {
                return Err(fmt_err(format!("bad record {line:?}")));
            };
            let num = |s: &str| s.parse::<u32>().map_err(|_| fmt_err(format!("bad number in {line:?}")));
            let (p, b, c) = (num(p)?, num(b)?, num(c)?);
            let idx = primes.iter().position(|&q| q == p).ok_or_else(|| fmt_err(format!("record for unlisted prime {p}")))?;
            let (p0, s0) = parse_point_periods(x, p)?;
            let (p1, s1) = parse_point_periods(y, p)?;
            insert(&mut tables[idx], b, c, DbEntry { points: [p0, p1], periods: [s0, s1] })?;
        }
        Ok(Database { tables, meta })
    }
}

fn insert(t: &mut PrimeTable, b: u32, c: u32, e: DbEntry) -> Result<()> {
    if b >= t.p || c >= t.p {
        return Err(fmt_err(format!("key ({b}, {c}) out of range mod {}", t.p)));
    }
    if t.get(b, c).is_some() {
        return Err(fmt_err(format!("duplicate record ({b}, {c}) mod {}", t.p)));
    }
    t.set(b, c, &e)
}

fn check_header_primes(primes: &[u32]) -> Result<()> {
    validate_primes(primes).map_err(|e| fmt_err(format!("prime list: {e}")))?;
    if primes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(fmt_err("prime list is not ascending"));
    }
    Ok(())
}

fn parse_point_periods(s: &str, p: u32) -> Result<(FpPoint, PeriodSet)> {
    let bad = || fmt_err(format!("bad point/period field {s:?}"));
    let (pt, per) = s.split_once(':').ok_or_else(bad)?;
    let pt = if pt == "inf" {
        FpPoint::Infinity
    } else {
        let v: u32 = pt.parse().map_err(|_| bad())?;
        if v >= p {
            return Err(bad());
        }
        FpPoint::Finite(v)
    };
    let inner = per.strip_prefix('{').and_then(|x| x.strip_suffix('}')).ok_or_else(bad)?;
    let v: Vec<u64> = inner.split(',').map(|x| x.parse().map_err(|_| bad())).collect::<Result<_>>()?;
    Ok((pt, PeriodSet::from_slice(&v).ok_or_else(bad)?))
}

fn truncated(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        fmt_err("truncated file")
    } else {
        Error::Io(e)
    }
}

struct Reader<'a, R: Read> {
    r: &'a mut R,
}

impl<R: Read> Reader<'_, R> {
    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.r.read_exact(&mut buf).map_err(truncated)?;
        Ok(buf)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.array::<1>()?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.array()?))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.array()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.array()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn sample() -> Database {
        let mut db = Database::build(&[3, 5, 7, 11]).unwrap();
        db.set_meta("test");
        db
    }

    #[test]
    fn binary_round_trip() {
        let db = sample();
        let mut buf = Vec::new();
        db.write_to(&mut buf, DbFileFormat::Binary).unwrap();
        let back = Database::read_from(&mut Cursor::new(&buf)).unwrap();
        assert_eq!(back, db);
        assert_eq!(back.meta(), "test");
    }

    #[test]
    fn text_round_trip() {
        let db = sample();
        let mut buf = Vec::new();
        db.write_to(&mut buf, DbFileFormat::Text).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("\n7 0 1 0:{1} 3:{1,3}\n") || text.contains("\n7 0 1 3:{1,3} 0:{1}\n"));
        let back = Database::read_from(&mut Cursor::new(&buf)).unwrap();
        assert_eq!(back, db);
    }

    #[test]
    fn truncation_is_detected() {
        let db = sample();
        let mut buf = Vec::new();
        db.write_to(&mut buf, DbFileFormat::Binary).unwrap();
        for cut in [4, 20, buf.len() / 2, buf.len() - 1] {
            let err = Database::read_from(&mut Cursor::new(&buf[..cut])).unwrap_err();
            assert!(matches!(err, Error::DbFormat(_)), "cut {cut}: {err}");
        }
    }

    #[test]
    fn save_is_atomic_and_loadable() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("db.bin");
        let db = sample();
        db.save(&path, DbFileFormat::Binary).unwrap();
        assert!(!path.with_extension("partial").exists());
        assert_eq!(Database::load(&path).unwrap(), db);
        let tpath = dir.path().join("db.txt");
        db.save(&tpath, DbFileFormat::Text).unwrap();
        assert_eq!(Database::load(&tpath).unwrap(), db);
    }

    #[test]
    fn garbage_is_rejected() {
        let err = Database::read_from(&mut Cursor::new(b"hello world".to_vec())).unwrap_err();
        assert!(matches!(err, Error::DbFormat(_)));
    }
}
