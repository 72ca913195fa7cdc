//! Chunked enumeration of full assignments.
//!
//! The assignment space is cut into fixed-size chunks. Each chunk is summed
//! on its own and the chunk partials are folded into the result strictly in
//! chunk order, so the parallel and sequential strategies produce
//! bit-identical sums whatever the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;
use crate::model::Network;

/// Assignments per chunk.
pub const CHUNK_LEN: usize = 1 << 12;

// chunks evaluated per batch; bounds the number of live partial tables
const BATCH_LEN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise runs
    /// sequentially.
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

/// Weighted counts projected onto a subset of variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    /// Projected variable indices, first varying slowest in `cells`.
    pub vars: Vec<usize>,
    pub radix: Vec<usize>,
    pub cells: Vec<f64>,
    /// Sum of all weights.
    pub total: f64,
}

impl Projection {
    /// Cell index for per-variable state indices aligned with `vars`.
    pub fn cell_index(&self, states: &[usize]) -> usize {
        states
            .iter()
            .zip(&self.radix)
            .fold(0, |acc, (&s, &r)| acc * r + s)
    }

    /// Inverse of [`Projection::cell_index`].
    pub fn cell_states(&self, mut index: usize) -> Vec<usize> {
        let mut states = vec![0; self.radix.len()];
        for (slot, &r) in states.iter_mut().zip(&self.radix).rev() {
            *slot = index % r;
            index /= r;
        }
        states
    }
}

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
struct Sum {
    sum: f64,
    comp: f64,
}

impl Sum {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn merge(&mut self, other: Sum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    fn value(self) -> f64 {
        self.sum + self.comp
    }
}

struct Partial {
    cells: Vec<Sum>,
    total: Sum,
}

/// Sums `weight` over every full assignment of `net`, projected onto `vars`.
///
/// `weight` receives the full state vector indexed by variable.
pub fn project<W>(net: &Network, vars: &[usize], strategy: Strategy, weight: W) -> Result<Projection>
where
    W: Fn(&[usize]) -> f64 + Sync,
{
    let count = net.assignment_count()?;
    let radix: Vec<usize> = vars.iter().map(|&v| net.variable(v).cardinality()).collect();
    let width: usize = radix.iter().product();
    let var_strides = {
        let mut s = vec![0; vars.len()];
        let mut acc = 1;
        for (k, &r) in radix.iter().enumerate().rev() {
            s[k] = acc;
            acc *= r;
        }
        s
    };
    let cardinalities: Vec<usize> = net.variables().iter().map(|v| v.cardinality()).collect();

    let run_chunk = |chunk: usize| -> Partial {
        let start = chunk * CHUNK_LEN;
        let end = (start + CHUNK_LEN).min(count);
        let mut states = decode(start, &cardinalities);
        let mut cells = vec![Sum::default(); width];
        let mut total = Sum::default();
        for _ in start..end {
            let w = weight(&states);
            if w != 0.0 {
                let idx: usize = vars.iter().zip(&var_strides).map(|(&v, &s)| states[v] * s).sum();
                cells[idx].add(w);
                total.add(w);
            }
            increment(&mut states, &cardinalities);
        }
        Partial { cells, total }
    };

    let n_chunks = count.div_ceil(CHUNK_LEN);
    let mut cells = vec![Sum::default(); width];
    let mut total = Sum::default();
    let mut batch_start = 0;
    while batch_start < n_chunks {
        let batch_end = (batch_start + BATCH_LEN).min(n_chunks);
        let partials: Vec<Partial> = match strategy {
            #[cfg(feature = "parallel")]
            Strategy::Parallel => (batch_start..batch_end).into_par_iter().map(run_chunk).collect(),
            _ => (batch_start..batch_end).map(run_chunk).collect(),
        };
        for p in partials {
            for (c, x) in cells.iter_mut().zip(p.cells) {
                c.merge(x);
            }
            total.merge(p.total);
        }
        batch_start = batch_end;
    }

    Ok(Projection {
        vars: vars.to_vec(),
        radix,
        cells: cells.into_iter().map(Sum::value).collect(),
        total: total.value(),
    })
}

/// Mixed-radix decode, last variable fastest.
fn decode(mut index: usize, cardinalities: &[usize]) -> Vec<usize> {
    let mut states = vec![0; cardinalities.len()];
    for (slot, &c) in states.iter_mut().zip(cardinalities).rev() {
        *slot = index % c;
        index /= c;
    }
    states
}

#[inline]
fn increment(states: &mut [usize], cardinalities: &[usize]) {
    for (s, &c) in states.iter_mut().zip(cardinalities).rev() {
        *s += 1;
        if *s < c {
            return;
        }
        *s = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::load_network;

    #[test]
    fn odometer_matches_decode() {
        let cards = [2, 3, 2];
        let mut s = decode(0, &cards);
        for i in 0..12 {
            assert_eq!(s, decode(i, &cards));
            increment(&mut s, &cards);
        }
        assert_eq!(s, vec![0, 0, 0]);
    }

    #[test]
    fn cell_index_round_trip() {
        let p = Projection {
            vars: vec![0, 1, 2],
            radix: vec![3, 2, 4],
            cells: vec![0.0; 24],
            total: 0.0,
        };
        for i in 0..24 {
            assert_eq!(p.cell_index(&p.cell_states(i)), i);
        }
        assert_eq!(p.cell_index(&[1, 0, 2]), 10);
    }

    #[test]
    fn counts_every_assignment_once() {
        let net = load_network(include_str!("../fixtures/football.json")).unwrap();
        let p = project(&net, &[0, 3], Strategy::Sequential, |_| 1.0).unwrap();
        assert_eq!(p.total, 16.0);
        assert_eq!(p.cells, vec![4.0; 4]);
    }

    #[test]
    fn strategies_agree_bitwise() {
        let net = load_network(include_str!("../fixtures/football_reports.json")).unwrap();
        let w = |s: &[usize]| net.joint_of_states(s);
        let a = project(&net, &[1, 2], Strategy::Sequential, w).unwrap();
        let b = project(&net, &[1, 2], Strategy::Parallel, w).unwrap();
        assert_eq!(a, b);
    }
}
