// SPDX-License-Identifier: Apache-2.0

//! Field snapshots: one JSON header line followed by a binary payload.
//!
//! The payload holds, for each form component in sorted index order and each
//! site (row-major, `x₃` fastest), the `n × n` matrix value in row-major order
//! with every entry written as two little-endian `f64` (real, imaginary).

use std::io::{BufRead, Write};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::algebra::LieAlgebra;
use super::lattice::{Lattice, LatticeField};
use crate::exterior::basis;
use crate::{Error, Result};

pub const FORMAT: &str = "lattice-field-v1";

/// Largest anti-Hermitian projection defect accepted when reading.
const READ_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub format: String,
    pub grid: usize,
    pub rank: usize,
    pub degree: usize,
    pub center: bool,
    pub endianness: String,
    pub entry: String,
    pub components: Vec<Vec<usize>>,
}

pub fn write_snapshot<W: Write>(field: &LatticeField, mut w: W) -> Result<()> {
    let lat = field.lattice();
    let header = SnapshotHeader {
        format: FORMAT.into(),
        grid: lat.grid(),
        rank: lat.algebra.rank(),
        degree: field.degree(),
        center: lat.algebra.has_center(),
        endianness: "little".into(),
        entry: "complex-f64".into(),
        components: field.components().into_iter().map(basis::indices).collect(),
    };
    serde_json::to_writer(&mut w, &header)?;
    w.write_all(b"\n")?;
    let mut buf = Vec::with_capacity(16 * lat.rank_sq() * lat.sites());
    for c in 0..field.components().len() {
        buf.clear();
        for s in 0..lat.sites() {
            let m = lat.algebra.to_matrix(field.value(c, s));
            for r in 0..m.nrows() {
                for col in 0..m.ncols() {
                    let z: Complex64 = m[(r, col)];
                    buf.extend_from_slice(&z.re.to_le_bytes());
                    buf.extend_from_slice(&z.im.to_le_bytes());
                }
            }
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

pub fn read_snapshot<R: BufRead>(mut r: R) -> Result<LatticeField> {
    let mut line = String::new();
    r.read_line(&mut line)?;
    let header: SnapshotHeader = serde_json::from_str(line.trim_end())?;
    if header.format != FORMAT || header.endianness != "little" || header.entry != "complex-f64" {
        return Err(Error::Parse(format!("unsupported snapshot header: {}", line.trim_end())));
    }
    if header.grid < 1 || header.rank < 1 || header.degree > 4 {
        return Err(Error::Parse("snapshot header out of range".into()));
    }
    let alg = if header.center { LieAlgebra::u(header.rank) } else { LieAlgebra::su(header.rank) };
    let lat: Arc<Lattice> = Lattice::new(header.grid, alg);
    let mut field = LatticeField::zero(&lat, header.degree);
    let n = header.rank;
    let mut entry = [0u8; 16];
    for c in 0..field.components().len() {
        for s in 0..lat.sites() {
            let mut m = super::algebra::CMat::zeros(n, n);
            for row in 0..n {
                for col in 0..n {
                    r.read_exact(&mut entry)?;
                    let re = f64::from_le_bytes(entry[..8].try_into().unwrap_or([0; 8]));
                    let im = f64::from_le_bytes(entry[8..].try_into().unwrap_or([0; 8]));
                    m[(row, col)] = Complex64::new(re, im);
                }
            }
            let (x, defect) = lat.algebra.from_matrix(&m);
            if !(defect <= READ_TOL * (1.0 + m.norm())) {
                return Err(Error::LatticeMismatch(format!("snapshot value off the Lie algebra by {defect:e}")));
            }
            field.value_mut(c, s).copy_from_slice(&x);
        }
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Parse("trailing bytes after snapshot payload".into()));
    }
    Ok(field)
}

pub fn save(field: &LatticeField, path: &std::path::Path) -> Result<()> {
    let f = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    write_snapshot(field, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load(path: &std::path::Path) -> Result<LatticeField> {
    read_snapshot(std::io::BufReader::new(std::fs::File::open(path)?))
}

impl Lattice {
    fn rank_sq(&self) -> usize {
        self.algebra.rank() * self.algebra.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::HypercomplexFrame;
    use crate::torus::lattice::TorusSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn roundtrip_in_memory() {
        let lat = TorusSpec::new(3, 3, HypercomplexFrame::left()).unwrap().lattice();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = LatticeField::random(&lat, 2, 1.0, &mut rng);
        let mut bytes = Vec::new();
        write_snapshot(&f, &mut bytes).unwrap();
        let header_len = bytes.iter().position(|&b| b == b'\n').unwrap() + 1;
        assert_eq!(bytes.len() - header_len, 6 * 81 * 9 * 16);
        let back = read_snapshot(&bytes[..]).unwrap();
        assert!(back.axpy(-1.0, &f).max_abs() < 1e-14);
    }

    #[test]
    fn truncated_payload_is_rejected() {
        let lat = TorusSpec::new(3, 2, HypercomplexFrame::left()).unwrap().lattice();
        let f = LatticeField::zero(&lat, 1);
        let mut bytes = Vec::new();
        write_snapshot(&f, &mut bytes).unwrap();
        bytes.truncate(bytes.len() - 3);
        assert!(read_snapshot(&bytes[..]).is_err());
    }
}
