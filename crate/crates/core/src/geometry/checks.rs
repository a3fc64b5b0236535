//! Desk-scale checks on Rauzy fractal clouds.

use std::collections::{HashMap, HashSet};

use nalgebra::{DMatrix, DVector};

use super::cloud::{cell_of, closest_pair_distance, rauzy_cloud, Grid, PointCloud};
use super::{GeometryError, Projection};
use crate::exact::{char_poly, IntMatrix};
use crate::spectrum::spectral_decomposition;
use crate::substitution::{DumontThomas, PrefixSuffixAutomaton, Substitution};

#[derive(Clone, Debug)]
pub struct ExchangeConfig {
    /// Containment tolerance as a fraction of the cloud diameter.
    pub tolerance_fraction: f64,
    /// Grid side for the overlap estimate is `diameter / grid_divisions`.
    pub grid_divisions: usize,
}

impl Default for ExchangeConfig {
    fn default() -> Self {
        ExchangeConfig {
            tolerance_fraction: 1e-3,
            grid_divisions: 200,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExchangeReport {
    /// `V e_a` for each letter.
    pub translations: Vec<Vec<f64>>,
    /// `max ‖p_{n+1} − p_n − V e_{u_n}‖∞`.
    pub telescoping_error: f64,
    pub tolerance: f64,
    /// Fraction of translated points within `tolerance` of a cloud point.
    pub containment_ratio: f64,
    pub grid_side: f64,
    /// Fraction of occupied cells hit by at least two letters.
    pub overlap: f64,
    /// Same at half the grid side.
    pub overlap_refined: f64,
}

/// Checks the exchange `x ↦ x + V e_a` on the piece tagged `a`.
pub fn exchange_check(
    cloud: &PointCloud,
    proj: &Projection,
    cfg: &ExchangeConfig,
) -> ExchangeReport {
    let dim = cloud.dim;
    let translations: Vec<Vec<f64>> = (0..proj.letters()).map(|a| proj.column(a)).collect();
    let mut telescoping_error = 0.0f64;
    for i in 0..cloud.len().saturating_sub(1) {
        let t = &translations[cloud.tags[i]];
        let (p, q) = (cloud.point(i), cloud.point(i + 1));
        for k in 0..dim {
            telescoping_error = telescoping_error.max((q[k] - p[k] - t[k]).abs());
        }
    }
    let diam = cloud.diameter();
    let tolerance = diam * cfg.tolerance_fraction;
    let containment_ratio = if cloud.is_empty() {
        1.0
    } else if tolerance == 0.0 {
        0.0
    } else {
        let grid = Grid::new(&cloud.coords, dim, tolerance);
        let hit = (0..cloud.len())
            .filter(|&i| {
                let t = &translations[cloud.tags[i]];
                let q: Vec<f64> = cloud.point(i).iter().zip(t).map(|(x, y)| x + y).collect();
                grid.nearest(&q) <= tolerance
            })
            .count();
        hit as f64 / cloud.len() as f64
    };
    let grid_side = if cfg.grid_divisions == 0 {
        0.0
    } else {
        diam / cfg.grid_divisions as f64
    };
    ExchangeReport {
        translations,
        telescoping_error,
        tolerance,
        containment_ratio,
        grid_side,
        overlap: overlap_fraction(cloud, grid_side),
        overlap_refined: overlap_fraction(cloud, grid_side / 2.0),
    }
}

/// Fraction of occupied grid cells of side `side` containing points of at
/// least two letters.
pub fn overlap_fraction(cloud: &PointCloud, side: f64) -> f64 {
    if cloud.is_empty() || side <= 0.0 {
        return 0.0;
    }
    let mut cells: HashMap<Vec<i64>, (usize, bool)> = HashMap::new();
    for (i, p) in cloud.points().enumerate() {
        let tag = cloud.tags[i];
        cells
            .entry(cell_of(p, side))
            .and_modify(|e| {
                if e.0 != tag {
                    e.1 = true;
                }
            })
            .or_insert((tag, false));
    }
    cells.values().filter(|e| e.1).count() as f64 / cells.len() as f64
}

fn contraction(proj: &Projection) -> Result<&DMatrix<f64>, GeometryError> {
    proj.contraction
        .as_ref()
        .ok_or(GeometryError::NoContraction)
}

#[derive(Clone, Debug)]
pub struct LetterResidual {
    pub letter: usize,
    pub samples: usize,
    /// Sampled points of `R_a` to the union of the images.
    pub forward_max: f64,
    pub forward_mean: f64,
    /// Sampled image points to `R_a`.
    pub reverse_max: f64,
    pub reverse_mean: f64,
}

#[derive(Clone, Debug)]
pub struct IfsReport {
    pub depth: usize,
    pub letters: Vec<LetterResidual>,
}

impl IfsReport {
    pub fn forward_max(&self) -> f64 {
        self.letters
            .iter()
            .map(|l| l.forward_max)
            .fold(0.0, f64::max)
    }

    pub fn reverse_max(&self) -> f64 {
        self.letters
            .iter()
            .map(|l| l.reverse_max)
            .fold(0.0, f64::max)
    }
}

/// Largest image set built by `ifs_residual`.
const IFS_BUDGET: usize = 20_000_000;

fn strided(ids: &[usize], sample: usize) -> Vec<usize> {
    if ids.len() <= sample || sample == 0 {
        return ids.to_vec();
    }
    (0..sample).map(|k| ids[k * ids.len() / sample]).collect()
}

/// Residuals of `R_a = ∪ N^n R_b + Σ_{i<n} N^i V t_i` over the paths
/// `b → … → a` of length `depth` of the prefix-suffix automaton, with the
/// pieces approximated by the cloud.
pub fn ifs_residual(
    s: &Substitution,
    proj: &Projection,
    cloud: &PointCloud,
    depth: usize,
    sample: usize,
) -> Result<IfsReport, GeometryError> {
    let n_mat = contraction(proj)?;
    let dim = proj.dim();
    let aut = PrefixSuffixAutomaton::new(s);
    let ab = aut.abelianized();
    let mut into: Vec<Vec<usize>> = vec![Vec::new(); s.size()];
    for (k, t) in ab.iter().enumerate() {
        into[t.2].push(k);
    }
    let vt: Vec<DVector<f64>> = ab
        .iter()
        .map(|(_, t, _)| DVector::from_iterator(dim, proj.apply_counts(t)))
        .collect();
    let npow = n_mat.pow(depth as u32);
    let pieces: Vec<Vec<usize>> = (0..s.size()).map(|a| cloud.indices_of(a)).collect();
    let side = (cloud.diameter() / 256.0).max(f64::MIN_POSITIVE);

    let mut letters = Vec::new();
    for a in 0..s.size() {
        // (b, Σ N^i V t_i) for every path of length `depth` ending at a.
        let mut paths: Vec<(usize, DVector<f64>, DMatrix<f64>)> =
            vec![(a, DVector::zeros(dim), DMatrix::identity(dim, dim))];
        for _ in 0..depth {
            let mut next = Vec::new();
            for (x, off, np) in &paths {
                for &k in &into[*x] {
                    next.push((ab[k].0, off + np * &vt[k], np * n_mat));
                }
            }
            paths = next;
        }
        let size: usize = paths.iter().map(|(b, _, _)| pieces[*b].len()).sum();
        if size > IFS_BUDGET {
            return Err(GeometryError::Budget {
                what: "IFS image set",
                needed: size,
                budget: IFS_BUDGET,
            });
        }
        let mut images = Vec::with_capacity(size * dim);
        for (b, off, _) in &paths {
            for &i in &pieces[*b] {
                let y = DVector::from_column_slice(cloud.point(i));
                images.extend((&npow * y + off).iter());
            }
        }
        let own: Vec<f64> = pieces[a]
            .iter()
            .flat_map(|&i| cloud.point(i).to_vec())
            .collect();
        let img_grid = Grid::new(&images, dim, side);
        let own_grid = Grid::new(&own, dim, side);
        let fwd: Vec<f64> = strided(&pieces[a], sample)
            .iter()
            .map(|&i| img_grid.nearest(cloud.point(i)))
            .collect();
        let img_ids: Vec<usize> = (0..images.len() / dim.max(1)).collect();
        let rev: Vec<f64> = strided(&img_ids, sample)
            .iter()
            .map(|&i| own_grid.nearest(&images[i * dim..(i + 1) * dim]))
            .collect();
        let stats = |v: &[f64]| {
            if v.is_empty() {
                (0.0, 0.0)
            } else {
                (
                    v.iter().copied().fold(0.0, f64::max),
                    v.iter().sum::<f64>() / v.len() as f64,
                )
            }
        };
        let (fm, fa) = stats(&fwd);
        let (rm, ra) = stats(&rev);
        letters.push(LetterResidual {
            letter: a,
            samples: fwd.len(),
            forward_max: fm,
            forward_mean: fa,
            reverse_max: rm,
            reverse_mean: ra,
        });
    }
    Ok(IfsReport { depth, letters })
}

/// Default and largest depth for `epsilon_separation`.
pub const DEFAULT_SEPARATION_DEPTH: usize = 8;

const SEPARATION_BUDGET: usize = 4_000_000;

#[derive(Clone, Debug)]
pub struct SeparationLevel {
    pub n: usize,
    /// Number of automaton paths of length `n`, summed over `(a, b)`.
    pub paths: usize,
    /// Distinct points, summed over `(a, b)`.
    pub points: usize,
    /// Smallest distance between distinct points of one `D^n_{a,b}`.
    pub min_distance: f64,
}

#[derive(Clone, Debug)]
pub struct SeparationReport {
    pub levels: Vec<SeparationLevel>,
    pub min_distance: f64,
}

impl SeparationReport {
    pub fn level(&self, n: usize) -> Option<&SeparationLevel> {
        self.levels.iter().find(|l| l.n == n)
    }
}

/// Pairwise separation of `D^n_{a,b} = {Σ_{i<n} N^{i−n} V t_i}` over paths
/// `b →t_{n−1} … →t_0 a`, for `1 ≤ n ≤ n_max`. Points with the same image
/// under `P(M)`, where the characteristic polynomial is `π_β P`, are the
/// same point of `D^n_{a,b}` and are counted once.
pub fn epsilon_separation(
    s: &Substitution,
    proj: &Projection,
    n_max: usize,
) -> Result<SeparationReport, GeometryError> {
    if n_max > DEFAULT_SEPARATION_DEPTH {
        return Err(GeometryError::Budget {
            what: "separation depth",
            needed: n_max,
            budget: DEFAULT_SEPARATION_DEPTH,
        });
    }
    let n_inv = contraction(proj)?
        .clone()
        .try_inverse()
        .ok_or(GeometryError::NoContraction)?;
    let m = s.incidence_matrix();
    let dec = spectral_decomposition(&m)?;
    let p = char_poly(&m)?
        .div_exact(dec.perron_poly())
        .expect("the Perron factor divides the characteristic polynomial");
    let pm = to_i128(&m.eval_poly(&p));
    let mi = to_i128(&m);
    let dim = proj.dim();
    let n = s.size();

    let aut = PrefixSuffixAutomaton::new(s);
    let ab = aut.abelianized();
    let mut into: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, t) in ab.iter().enumerate() {
        into[t.2].push(k);
    }
    let vt: Vec<DVector<f64>> = ab
        .iter()
        .map(|(_, t, _)| DVector::from_iterator(dim, proj.apply_counts(t)))
        .collect();

    struct State {
        end: usize,
        current: usize,
        x: DVector<f64>,
        c: Vec<i128>,
    }
    let mut states: Vec<State> = (0..n)
        .map(|a| State {
            end: a,
            current: a,
            x: DVector::zeros(dim),
            c: vec![0; n],
        })
        .collect();
    // M^i as i128, applied to the digit of step i.
    let mut mpow: Vec<Vec<i128>> = identity_i128(n);
    let mut levels = Vec::new();
    for level in 1..=n_max {
        let needed: usize = states.iter().map(|st| into[st.current].len()).sum();
        if needed > SEPARATION_BUDGET {
            return Err(GeometryError::Budget {
                what: "separation paths",
                needed,
                budget: SEPARATION_BUDGET,
            });
        }
        let mut next = Vec::with_capacity(needed);
        for st in &states {
            for &k in &into[st.current] {
                let t: Vec<i128> = ab[k].1.iter().map(|&x| x as i128).collect();
                let mt = mat_vec(&mpow, &t);
                next.push(State {
                    end: st.end,
                    current: ab[k].0,
                    x: &n_inv * (&st.x + &vt[k]),
                    c: st.c.iter().zip(&mt).map(|(a, b)| a + b).collect(),
                });
            }
        }
        states = next;
        mpow = mat_mul(&mpow, &mi);

        let mut groups: HashMap<(usize, usize), (HashSet<Vec<i128>>, Vec<Vec<f64>>)> =
            HashMap::new();
        for st in &states {
            let g = groups.entry((st.end, st.current)).or_default();
            if g.0.insert(mat_vec(&pm, &st.c)) {
                g.1.push(st.x.iter().copied().collect());
            }
        }
        let mut keys: Vec<_> = groups.keys().copied().collect();
        keys.sort_unstable();
        let mut min_distance = f64::INFINITY;
        let mut points = 0;
        for k in keys {
            let pts = &groups[&k].1;
            points += pts.len();
            min_distance = min_distance.min(closest_pair_distance(pts));
        }
        levels.push(SeparationLevel {
            n: level,
            paths: states.len(),
            points,
            min_distance,
        });
    }
    let min_distance = levels
        .iter()
        .map(|l| l.min_distance)
        .fold(f64::INFINITY, f64::min);
    Ok(SeparationReport {
        levels,
        min_distance,
    })
}

fn to_i128(m: &IntMatrix) -> Vec<Vec<i128>> {
    use num_traits::ToPrimitive;
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| m[(i, j)].to_i128().expect("matrix entry fits in i128"))
                .collect()
        })
        .collect()
}

fn identity_i128(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

fn mat_vec(m: &[Vec<i128>], v: &[i128]) -> Vec<i128> {
    m.iter()
        .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn mat_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|r| {
            (0..n)
                .map(|j| r.iter().enumerate().map(|(k, x)| x * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Points `(φ_V(x), φ_{V'}(x))` along the worm.
#[derive(Clone, Debug)]
pub struct PsiGraph {
    pub base: PointCloud,
    pub image: PointCloud,
    /// Distinct first Dumont-Thomas digits `t_0` met.
    pub digit_classes: usize,
    /// `max ‖(ψ(x) − x) − (V' − V) t_0‖∞`.
    pub max_translation_deviation: f64,
}

impl PsiGraph {
    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }
}

/// Graph of `ψ = φ_{V'} ∘ φ_V⁻¹` sampled on worm points, with the check that
/// `ψ` is the translation by `(V' − V) t_0` on the points whose first digit
/// is `t_0`.
pub fn psi_graph(
    s: &Substitution,
    v: &Projection,
    v_prime: &Projection,
    n_points: usize,
) -> Result<PsiGraph, GeometryError> {
    if v.dim() != v_prime.dim() {
        return Err(GeometryError::Dimension {
            found: v_prime.dim(),
            expected: v.dim(),
        });
    }
    let base = rauzy_cloud(s, v, n_points)?;
    let image = rauzy_cloud(s, v_prime, n_points)?;
    let seed = base.seed.expect("rauzy_cloud records the seed");
    let sp = s.pow(seed.power);
    let dt = DumontThomas::from_prefix(&sp, base.tags.clone());
    let diff = Projection {
        matrix: &v_prime.matrix - &v.matrix,
        ..v.clone()
    };
    let mut classes: HashSet<Vec<i64>> = HashSet::new();
    let mut dev = 0.0f64;
    for k in 0..base.len() {
        let exp = dt.digits(k)?;
        let t0 = exp
            .digits
            .first()
            .cloned()
            .unwrap_or_else(|| vec![0; s.size()]);
        let shift = diff.apply_counts(&t0);
        classes.insert(t0);
        for (j, sh) in shift.iter().enumerate() {
            let d = image.point(k)[j] - base.point(k)[j] - sh;
            dev = dev.max(d.abs());
        }
    }
    Ok(PsiGraph {
        base,
        image,
        digit_classes: classes.len(),
        max_translation_deviation: dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::usual_projection;
    use crate::substitution::parse_substitution;

    #[test]
    fn fibonacci_separation() {
        let s = parse_substitution("a->ab b->a").unwrap();
        let p = usual_projection(&s).unwrap();
        let r = epsilon_separation(&s, &p, 6).unwrap();
        assert!(r.min_distance > 0.1, "{r:?}");
        let m = s.incidence_matrix();
        for l in &r.levels {
            // Path count is the sum of the entries of M^n.
            let mn = m.pow(l.n as u64);
            let total: usize = (0..2)
                .flat_map(|i| (0..2).map(move |j| (i, j)))
                .map(|(i, j)| usize::try_from(&mn[(i, j)]).unwrap())
                .sum();
            assert_eq!(l.paths, total);
        }
        assert!(epsilon_separation(&s, &p, 9).is_err());
    }

    #[test]
    fn ifs_depth_zero_is_exact() {
        let s = parse_substitution("a->ab b->a").unwrap();
        let p = usual_projection(&s).unwrap();
        let c = rauzy_cloud(&s, &p, 2000).unwrap();
        let r = ifs_residual(&s, &p, &c, 0, 100).unwrap();
        assert_eq!(r.forward_max(), 0.0);
        let r1 = ifs_residual(&s, &p, &c, 1, 500).unwrap();
        assert!(r1.forward_max() < 1e-9, "{r1:?}");
    }

    #[test]
    fn exchange_on_fibonacci() {
        let s = parse_substitution("a->ab b->a").unwrap();
        let p = usual_projection(&s).unwrap();
        let c = rauzy_cloud(&s, &p, 5000).unwrap();
        let r = exchange_check(&c, &p, &ExchangeConfig::default());
        assert!(r.telescoping_error < 1e-12);
        assert!(r.containment_ratio > 0.99);
        assert_eq!(r.translations[0], p.column(0));
    }
}
