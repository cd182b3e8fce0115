use rand::Rng;

use crate::complex::ChainComplex;

/// Ball centers for the deterministic scheme, with a proper coloring of
/// the conflict graph (centers at distance `≤ 2·r_dec`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub centers: Vec<usize>,
    /// Color of each entry of `centers`.
    pub colors: Vec<usize>,
    pub n_colors: usize,
    /// Largest number of conflicting neighbours of any center.
    pub conflict_degree: usize,
}

impl Cover {
    /// Centers of one color, in ascending order.
    pub fn color_class(&self, color: usize) -> impl Iterator<Item = usize> + '_ {
        self.centers
            .iter()
            .zip(&self.colors)
            .filter(move |(_, &c)| c == color)
            .map(|(&v, _)| v)
    }
}

/// `⌈r/2⌉`: how close every vertex must be to some center.
pub fn covering_radius(r_dec: u32) -> u32 {
    r_dec.div_ceil(2)
}

fn covers(c: &ChainComplex, centers: &[usize], radius: u32) -> bool {
    !centers.is_empty() && c.distances_from_set(centers, Some(radius)).iter().all(|&d| d <= radius)
}

/// Sublattice centers when coordinates are available and the sublattice
/// covers; otherwise a greedy maximal net in vertex order.
fn cover_centers(c: &ChainComplex, r_dec: u32) -> Vec<usize> {
    let radius = covering_radius(r_dec);
    if let Some(coords) = c.coords() {
        let d = coords.first().map_or(0, Vec::len).max(1) as u32;
        // Largest spacing s with d·⌊s/2⌋ ≤ ⌈r/2⌉.
        let spacing = (2 * (radius / d) + 1).max(1) as i64;
        let centers: Vec<usize> = coords
            .iter()
            .enumerate()
            .filter(|(_, x)| x.iter().all(|&xi| xi.rem_euclid(spacing) == 0))
            .map(|(v, _)| v)
            .collect();
        if covers(c, &centers, radius) {
            return centers;
        }
    }
    let mut covered = vec![false; c.count(0)];
    let mut centers = Vec::new();
    for v in 0..c.count(0) {
        if covered[v] {
            continue;
        }
        centers.push(v);
        for (w, d) in c.distances_from(v, Some(radius)).into_iter().enumerate() {
            if d <= radius {
                covered[w] = true;
            }
        }
    }
    centers
}

pub fn deterministic_cover(c: &ChainComplex, r_dec: u32) -> Cover {
    assert!(r_dec >= 1, "r_dec must be at least 1");
    let centers = cover_centers(c, r_dec);
    let mut index_of = vec![usize::MAX; c.count(0)];
    for (i, &v) in centers.iter().enumerate() {
        index_of[v] = i;
    }
    let mut colors = vec![usize::MAX; centers.len()];
    let mut n_colors = 0;
    let mut conflict_degree = 0;
    for (i, &v) in centers.iter().enumerate() {
        let dist = c.distances_from(v, Some(2 * r_dec));
        let mut taken = Vec::new();
        let mut degree = 0;
        for (w, &d) in dist.iter().enumerate() {
            if w != v && d <= 2 * r_dec && index_of[w] != usize::MAX {
                degree += 1;
                let cw = colors[index_of[w]];
                if cw != usize::MAX {
                    taken.push(cw);
                }
            }
        }
        conflict_degree = conflict_degree.max(degree);
        taken.sort_unstable();
        taken.dedup();
        let color = (0..).find(|k| taken.binary_search(k).is_err()).expect("free color");
        colors[i] = color;
        n_colors = n_colors.max(color + 1);
    }
    Cover {
        centers,
        colors,
        n_colors,
        conflict_degree,
    }
}

/// Thinned random centers: each vertex joins `Y` with probability `rho`;
/// a point of `Y` is kept only if no other point of `Y` lies within
/// distance `2·r_dec`.
pub fn sample_centers<R: Rng + ?Sized>(c: &ChainComplex, r_dec: u32, rho: f64, rng: &mut R) -> Vec<usize> {
    assert!(r_dec >= 1, "r_dec must be at least 1");
    assert!((0.0..=1.0).contains(&rho), "rho must lie in [0, 1]");
    let y: Vec<usize> = (0..c.count(0)).filter(|_| rng.gen_bool(rho)).collect();
    thin(c, r_dec, &y)
}

pub(crate) fn thin(c: &ChainComplex, r_dec: u32, y: &[usize]) -> Vec<usize> {
    let mut in_y = vec![false; c.count(0)];
    for &v in y {
        in_y[v] = true;
    }
    y.iter()
        .copied()
        .filter(|&v| {
            c.distances_from(v, Some(2 * r_dec))
                .iter()
                .enumerate()
                .all(|(w, &d)| w == v || d > 2 * r_dec || !in_y[w])
        })
        .collect()
}

/// `1 / |ball(2·r_dec)|` around vertex 0.
pub fn default_density(c: &ChainComplex, r_dec: u32) -> f64 {
    1.0 / c.metric_ball(0, 2 * r_dec).len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_hypercubic_torus;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_density_gives_no_centers() {
        let c = build_hypercubic_torus(2, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(sample_centers(&c, 2, 0.0, &mut rng).is_empty());
    }

    #[test]
    fn close_pair_is_thinned() {
        let c = build_hypercubic_torus(2, 9);
        assert!(thin(&c, 2, &[0, 2]).is_empty());
        assert_eq!(thin(&c, 2, &[0, 40]).len(), 2);
    }

    #[test]
    fn sampled_centers_are_separated() {
        let c = build_hypercubic_torus(4, 7);
        for seed in 0..5 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = sample_centers(&c, 2, 0.02, &mut rng);
            for &a in &x {
                let d = c.distances_from(a, None);
                for &b in &x {
                    assert!(a == b || d[b] > 4, "centers {a} and {b} too close");
                }
            }
        }
    }

    fn check_cover(c: &ChainComplex, r: u32) -> Cover {
        let cover = deterministic_cover(c, r);
        let reach = c.distances_from_set(&cover.centers, None);
        assert!(reach.iter().all(|&d| d <= covering_radius(r)));
        for (i, &a) in cover.centers.iter().enumerate() {
            let d = c.distances_from(a, None);
            for (j, &b) in cover.centers.iter().enumerate() {
                if i != j && cover.colors[i] == cover.colors[j] {
                    assert!(d[b] > 2 * r);
                }
            }
        }
        assert!(cover.n_colors <= cover.conflict_degree + 1);
        cover
    }

    #[test]
    fn covers_and_colors() {
        check_cover(&build_hypercubic_torus(4, 4), 2);
        let c10 = check_cover(&build_hypercubic_torus(2, 10), 2);
        let c12 = check_cover(&build_hypercubic_torus(2, 12), 2);
        // Independent of L once the torus is larger than the conflict range.
        assert_eq!(c10.conflict_degree, c12.conflict_degree);
        let c4 = check_cover(&build_hypercubic_torus(2, 12), 4);
        assert!(c4.centers.len() < 144);
    }
}
