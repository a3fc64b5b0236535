//! Worm point clouds: `V ab(u_[0,n))` along a one-sided fixed point.

use rayon::prelude::*;

use super::{GeometryError, Projection};
use crate::substitution::{FixedPointSeed, Substitution};

/// Largest cloud generated in one call.
pub const MAX_POINTS: usize = 20_000_000;

const CHUNK: usize = 8192;

#[derive(Clone, Debug)]
pub struct PointCloud {
    pub dim: usize,
    /// Row-major `len × dim`.
    pub coords: Vec<f64>,
    /// `tags[n] = u_n`.
    pub tags: Vec<usize>,
    pub letters: Vec<String>,
    /// Power and letter of the fixed point the worm follows.
    pub seed: Option<FixedPointSeed>,
}

impl PointCloud {
    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks(self.dim.max(1)).take(self.len())
    }

    /// `(min, max)` per coordinate.
    pub fn bounding_box(&self) -> Vec<(f64, f64)> {
        let mut b = vec![(f64::INFINITY, f64::NEG_INFINITY); self.dim];
        for p in self.points() {
            for (k, &x) in p.iter().enumerate() {
                b[k].0 = b[k].0.min(x);
                b[k].1 = b[k].1.max(x);
            }
        }
        b
    }

    /// Diagonal of the bounding box; 0 for fewer than two points.
    pub fn diameter(&self) -> f64 {
        if self.len() < 2 {
            return 0.0;
        }
        self.bounding_box()
            .iter()
            .map(|(lo, hi)| (hi - lo) * (hi - lo))
            .sum::<f64>()
            .sqrt()
    }

    /// Indices of the points tagged `a`.
    pub fn indices_of(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.tags[i] == a).collect()
    }
}

/// First `n_points` worm points of the fixed point of the least power of `s`
/// that has one.
pub fn rauzy_cloud(
    s: &Substitution,
    proj: &Projection,
    n_points: usize,
) -> Result<PointCloud, GeometryError> {
    check_budget(n_points)?;
    if proj.letters() != s.size() {
        return Err(GeometryError::Dimension {
            found: proj.letters(),
            expected: s.size(),
        });
    }
    let seed = s.fixed_point_seed()?;
    let u = s
        .pow(seed.power)
        .fixed_point_prefix(seed.letter, n_points.max(1))?;
    let mut cloud = rauzy_cloud_of_word(proj, &u[..n_points.min(u.len())], s.letters());
    cloud.seed = Some(seed);
    Ok(cloud)
}

fn check_budget(n: usize) -> Result<(), GeometryError> {
    if n > MAX_POINTS {
        return Err(GeometryError::Budget {
            what: "point cloud",
            needed: n,
            budget: MAX_POINTS,
        });
    }
    Ok(())
}

/// Worm points of an arbitrary word. Abelianized prefixes are exact integer
/// counts: the chunk starts are joined sequentially, then every chunk is
/// projected independently, so the result does not depend on the thread
/// count.
pub fn rauzy_cloud_of_word(proj: &Projection, word: &[usize], letters: &[String]) -> PointCloud {
    let n = proj.letters();
    let dim = proj.dim();
    let mut starts = Vec::with_capacity(word.len() / CHUNK + 1);
    let mut counts = vec![0i64; n];
    for (i, &c) in word.iter().enumerate() {
        if i % CHUNK == 0 {
            starts.push(counts.clone());
        }
        counts[c] += 1;
    }
    let coords: Vec<f64> = word
        .par_chunks(CHUNK)
        .zip(starts.into_par_iter())
        .flat_map_iter(|(chunk, start)| {
            let mut c = start;
            let mut out = Vec::with_capacity(chunk.len() * dim);
            for &a in chunk {
                out.extend(proj.apply_counts(&c));
                c[a] += 1;
            }
            out
        })
        .collect();
    PointCloud {
        dim,
        coords,
        tags: word.to_vec(),
        letters: letters.to_vec(),
        seed: None,
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Smallest Euclidean distance between two of the points, by a sweep along
/// the first coordinate. Infinite for fewer than two points.
pub fn closest_pair_distance(points: &[Vec<f64>]) -> f64 {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    let key = |i: usize| points[i].first().copied().unwrap_or(0.0);
    idx.sort_by(|&a, &b| key(a).total_cmp(&key(b)));
    let mut best = f64::INFINITY;
    for i in 0..idx.len() {
        let p = &points[idx[i]];
        for &j in &idx[i + 1..] {
            if key(j) - key(idx[i]) >= best {
                break;
            }
            best = best.min(dist(p, &points[j]));
        }
    }
    best
}

/// Uniform grid over a point set for radius queries.
pub(crate) struct Grid<'a> {
    side: f64,
    dim: usize,
    pts: &'a [f64],
    cells: std::collections::HashMap<Vec<i64>, Vec<usize>>,
}

impl<'a> Grid<'a> {
    pub fn new(pts: &'a [f64], dim: usize, side: f64) -> Self {
        let mut cells: std::collections::HashMap<Vec<i64>, Vec<usize>> = Default::default();
        for (i, p) in pts.chunks(dim).enumerate() {
            cells.entry(cell_of(p, side)).or_default().push(i);
        }
        Grid {
            side,
            dim,
            pts,
            cells,
        }
    }

    fn point(&self, i: usize) -> &[f64] {
        &self.pts[i * self.dim..(i + 1) * self.dim]
    }

    /// Distance to the nearest point, searching rings of cells outwards;
    /// infinite when the grid is empty.
    pub fn nearest(&self, q: &[f64]) -> f64 {
        if self.cells.is_empty() {
            return f64::INFINITY;
        }
        let c = cell_of(q, self.side);
        let mut best = f64::INFINITY;
        let mut r = 0i64;
        loop {
            let ring_cells = (2 * r + 1).checked_pow(self.dim as u32).unwrap_or(i64::MAX);
            if ring_cells > 1 << 20 {
                return self.brute_nearest(q);
            }
            for off in ring(self.dim, r) {
                let key: Vec<i64> = c.iter().zip(&off).map(|(a, b)| a + b).collect();
                if let Some(ids) = self.cells.get(&key) {
                    for &i in ids {
                        best = best.min(dist(q, self.point(i)));
                    }
                }
            }
            // Points outside the searched block are at least r * side away.
            if best <= r as f64 * self.side {
                return best;
            }
            r += 1;
        }
    }

    fn brute_nearest(&self, q: &[f64]) -> f64 {
        self.pts
            .chunks(self.dim)
            .map(|p| dist(q, p))
            .fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn cell_of(p: &[f64], side: f64) -> Vec<i64> {
    p.iter().map(|x| (x / side).floor() as i64).collect()
}

/// Offsets with Chebyshev norm exactly `r`.
fn ring(dim: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        let mut next = Vec::new();
        for o in &out {
            for x in -r..=r {
                let mut v = o.clone();
                v.push(x);
                next.push(v);
            }
        }
        out = next;
    }
    out.retain(|o| o.iter().any(|x| x.abs() == r));
    if r == 0 {
        out = vec![vec![0; dim]];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::usual_projection;
    use crate::substitution::parse_substitution;

    #[test]
    fn single_point() {
        let s = parse_substitution("a->ab b->a").unwrap();
        let p = usual_projection(&s).unwrap();
        let c = rauzy_cloud(&s, &p, 1).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.point(0), &[0.0]);
        assert_eq!(c.tags, vec![0]);
    }

    #[test]
    fn fibonacci_interval() {
        let s = parse_substitution("a->ab b->a").unwrap();
        let p = usual_projection(&s).unwrap();
        let c = rauzy_cloud(&s, &p, 10_000).unwrap();
        assert!(c.diameter() < 2.0 * p.matrix.abs().max());
        // The two pieces are intervals meeting in one point.
        let (mut a, mut b) = (vec![], vec![]);
        for (i, x) in c.points().enumerate() {
            if c.tags[i] == 0 {
                a.push(x[0])
            } else {
                b.push(x[0])
            }
        }
        let hull = |v: &[f64]| {
            (
                v.iter().copied().fold(f64::INFINITY, f64::min),
                v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            )
        };
        let (ha, hb) = (hull(&a), hull(&b));
        let overlap = (ha.1.min(hb.1) - ha.0.max(hb.0)).max(0.0);
        assert!(overlap < 1e-3 * c.diameter());
    }

    #[test]
    fn grid_nearest_matches_brute_force() {
        let pts: Vec<f64> = (0..200).map(|i| ((i * 37) % 101) as f64 * 0.013).collect();
        let g = Grid::new(&pts, 2, 0.05);
        for q in [[0.3, 0.7], [5.0, -2.0], [0.0, 0.0]] {
            assert_eq!(g.nearest(&q), g.brute_nearest(&q));
        }
    }

    #[test]
    fn closest_pair() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![3.0, 0.0],
            vec![1.0, 1.0],
            vec![1.1, 1.0],
        ];
        assert!((closest_pair_distance(&pts) - 0.1).abs() < 1e-12);
        assert_eq!(closest_pair_distance(&pts[..1]), f64::INFINITY);
    }
}
