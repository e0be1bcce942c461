//! Trajectory files.
//!
//! CSV is long format with header `t,x,y`, one line per node and snapshot.
//!
//! The binary layout is little-endian throughout: a 32-byte header
//! `N: u64, L: f64, dt: f64, count: u64`, then `count` rows of `N + 1` f64
//! values, each row being the snapshot time followed by the `N` nodal values.

use std::io::{self, Read, Write};

use super::Trajectory;
use crate::Real;

pub fn write_csv<T: Real, W: Write>(traj: &Trajectory<T>, mut w: W) -> io::Result<()> {
    writeln!(w, "t,x,y")?;
    let xs = traj.grid.nodes();
    for (t, y) in traj.times.iter().zip(&traj.states) {
        for (x, v) in xs.iter().zip(y) {
            writeln!(w, "{:.16e},{:.16e},{:.16e}", t.as_f64(), x.as_f64(), v.as_f64())?;
        }
    }
    w.flush()
}

pub fn write_binary<T: Real, W: Write>(traj: &Trajectory<T>, mut w: W) -> io::Result<()> {
    w.write_all(&(traj.grid.n as u64).to_le_bytes())?;
    w.write_all(&traj.grid.length.as_f64().to_le_bytes())?;
    w.write_all(&traj.dt.as_f64().to_le_bytes())?;
    w.write_all(&(traj.len() as u64).to_le_bytes())?;
    for (t, y) in traj.times.iter().zip(&traj.states) {
        w.write_all(&t.as_f64().to_le_bytes())?;
        for v in y {
            w.write_all(&v.as_f64().to_le_bytes())?;
        }
    }
    w.flush()
}

/// Contents of a binary trajectory file.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryTrajectory {
    pub n: usize,
    pub length: f64,
    pub dt: f64,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

pub fn read_binary<R: Read>(mut r: R) -> io::Result<BinaryTrajectory> {
    let mut b = [0u8; 8];
    let mut next = |r: &mut R| -> io::Result<[u8; 8]> {
        r.read_exact(&mut b)?;
        Ok(b)
    };
    let n = u64::from_le_bytes(next(&mut r)?) as usize;
    let length = f64::from_le_bytes(next(&mut r)?);
    let dt = f64::from_le_bytes(next(&mut r)?);
    let count = u64::from_le_bytes(next(&mut r)?) as usize;
    if n == 0 || n > 1 << 28 || count > 1 << 32 {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "implausible header"));
    }
    let mut times = Vec::with_capacity(count.min(1 << 20));
    let mut states = Vec::with_capacity(count.min(1 << 20));
    for _ in 0..count {
        times.push(f64::from_le_bytes(next(&mut r)?));
        let mut row = Vec::with_capacity(n);
        for _ in 0..n {
            row.push(f64::from_le_bytes(next(&mut r)?));
        }
        states.push(row);
    }
    Ok(BinaryTrajectory { n, length, dt, times, states })
}
