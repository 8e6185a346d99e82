//! Full verification run over a rational sample grid: singular locus,
//! section zero locus, contact-order probes, lift injectivity, disc
//! membership, and the framing sweep along the boundary sphere. Every
//! decision is exact; the report records the grid scheme so runs are
//! reproducible bit for bit.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::frame::{framing_frame, DEFAULT_FRAME_TOLERANCE};
use super::germ::{image_norm_squared, invert_lift, lift_map, Germ, SourcePoint};
use super::linalg::rank_i128;
use super::section::{jacobian_rank, sigma2_empty_check, sigma2_empty_check_for};

/// Default grid height: numerators and denominators of axis values stay
/// at or below this bound.
pub const DEFAULT_GRID_HEIGHT: u32 = 8;

#[derive(Clone, Debug, Serialize)]
pub struct UmbrellaConfig {
    /// Axis values are the integers `0, ±1..±height` and the unit
    /// fractions `±1/2..±1/height`.
    pub height: u32,
    /// Orthonormality reporting tolerance for the f64 frames.
    pub tolerance: f64,
    /// Number of distinct boundary-sphere sample points to frame.
    pub sphere_samples: usize,
    /// Number of random source-point pairs for the injectivity check.
    pub pair_samples: usize,
    /// Seed of the deterministic pair generator.
    pub seed: u64,
}

impl Default for UmbrellaConfig {
    fn default() -> Self {
        Self {
            height: DEFAULT_GRID_HEIGHT,
            tolerance: DEFAULT_FRAME_TOLERANCE,
            sphere_samples: 200,
            pair_samples: 10_000,
            seed: 0x7e57_ab1e,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridSummary {
    pub axis_scheme: String,
    pub axis_values: usize,
    pub points: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SphereSummary {
    /// Exact rational gap allowed between the sample's squared norm and 1.
    pub boundary_gap: String,
    pub points: usize,
    pub membership_violations: usize,
    pub frame_failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct UmbrellaReport {
    pub config: UmbrellaConfig,
    pub grid: GridSummary,
    pub singular_points: Vec<String>,
    pub s1_zero_points: Vec<String>,
    pub rank_equivalence_mismatches: u64,
    pub origin_rank: usize,
    pub origin_lift_rank: usize,
    pub sigma2_empty: bool,
    pub negative_control_sigma2_empty: bool,
    pub lift_pairs_checked: usize,
    pub lift_collisions: usize,
    pub lift_inversion_failures: usize,
    pub sphere: SphereSummary,
    pub pass: bool,
}

/// Axis value `num/den` in lowest terms with `den >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct AxisValue {
    num: i64,
    den: i64,
}

impl AxisValue {
    fn display(self) -> String {
        if self.den == 1 {
            format!("{}", self.num)
        } else {
            format!("{}/{}", self.num, self.den)
        }
    }

    fn to_rational(self) -> BigRational {
        BigRational::new(self.num.into(), self.den.into())
    }
}

fn axis_values(height: u32) -> Vec<AxisValue> {
    let h = i64::from(height.max(1));
    let mut values = vec![AxisValue { num: 0, den: 1 }];
    for n in 1..=h {
        values.push(AxisValue { num: n, den: 1 });
        values.push(AxisValue { num: -n, den: 1 });
    }
    for d in 2..=h {
        values.push(AxisValue { num: 1, den: d });
        values.push(AxisValue { num: -1, den: d });
    }
    // Ascending by exact value; i64 products cannot overflow here.
    values.sort_by(|a, b| (a.num * b.den).cmp(&(b.num * a.den)));
    values
}

/// Exact singularity and section-zero tests at a grid point, entirely in
/// machine integers: build the Jacobians with denominators cleared row by
/// row and run fraction-free elimination.
fn grid_point_ranks(x: AxisValue, t: [AxisValue; 3]) -> (usize, bool) {
    // Rows of the lifted Jacobian with the vertical direction appended as
    // a fifth column: [d/dx, d/dt1, d/dt2, d/dt3 | e8].
    let mut rows: Vec<Vec<i128>> = Vec::with_capacity(8);
    rows.push(vec![0, 1, 0, 0, 0]);
    rows.push(vec![0, 0, 1, 0, 0]);
    rows.push(vec![0, 0, 0, 1, 0]);
    for (m, tm) in t.iter().enumerate() {
        // Row (t_m, .., x, ..): clear by lcm of the two denominators.
        let lcm = i128::from(tm.den).lcm(&i128::from(x.den));
        let mut row = vec![0i128; 5];
        row[0] = i128::from(tm.num) * (lcm / i128::from(tm.den));
        row[m + 1] = i128::from(x.num) * (lcm / i128::from(x.den));
        rows.push(row);
    }
    // Row d(x^2) = (2x, 0, 0, 0): cleared by its denominator.
    rows.push(vec![2 * i128::from(x.num), 0, 0, 0, 0]);
    // Lift row d(z5) = (1, 0, 0, 0) plus the vertical's single entry.
    rows.push(vec![1, 0, 0, 0, 1]);

    let map_rows: Vec<Vec<i128>> = rows[..7].iter().map(|row| row[..4].to_vec()).collect();
    let rank7 = rank_i128(map_rows).expect("grid entries are tiny");
    let augmented_rank = rank_i128(rows).expect("grid entries are tiny");
    // The lifted Jacobian has rank 4 everywhere, so the section vanishes
    // exactly when appending the vertical does not raise the rank.
    (rank7, augmented_rank == 4)
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn random_point(state: &mut u64) -> SourcePoint {
    let coord = |state: &mut u64| {
        let num = (splitmix64(state) % 129) as i64 - 64;
        let den = (splitmix64(state) % 16) as i64 + 1;
        BigRational::new(num.into(), den.into())
    };
    let x = coord(state);
    let t = [coord(state), coord(state), coord(state)];
    SourcePoint::new(x, t)
}

/// Primitive integer representative of the ray through a nonzero grid
/// direction, used to deduplicate boundary samples.
fn ray_key(coords: &[BigRational; 4]) -> Vec<BigInt> {
    let lcm = coords
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = coords
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !gcd.is_zero() {
        for v in ints.iter_mut() {
            *v = &*v / &gcd;
        }
    }
    if let Some(first) = ints.iter().find(|v| !v.is_zero()) {
        if first.is_negative() {
            for v in ints.iter_mut() {
                *v = -&*v;
            }
        }
    }
    ints
}

/// Scale the direction so the unlifted image lands within `gap` below the
/// unit sphere: returns `lambda * u` with `1 - gap <= |U(lambda u)|^2 <= 1`.
fn scale_to_boundary(direction: &SourcePoint, gap: &BigRational) -> SourcePoint {
    let norm_at = |lambda: &BigRational| -> BigRational {
        let p = SourcePoint::new(
            &direction.x * lambda,
            [
                &direction.t[0] * lambda,
                &direction.t[1] * lambda,
                &direction.t[2] * lambda,
            ],
        );
        image_norm_squared(&p)
    };
    let one = BigRational::one();
    let mut lo = BigRational::zero();
    let mut hi = BigRational::one();
    let mut guard = 0;
    while norm_at(&hi) < one {
        hi = &hi * BigRational::from_integer(2.into());
        guard += 1;
        assert!(guard < 128, "direction does not reach the boundary");
    }
    loop {
        let lo_norm = norm_at(&lo);
        if lo_norm <= one && lo_norm >= &one - gap {
            break;
        }
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        if norm_at(&mid) > one {
            hi = mid;
        } else {
            lo = mid;
        }
        guard += 1;
        assert!(guard < 512, "boundary bisection failed to converge");
    }
    SourcePoint::new(
        &direction.x * &lo,
        [
            &direction.t[0] * &lo,
            &direction.t[1] * &lo,
            &direction.t[2] * &lo,
        ],
    )
}

/// Run every umbrella check at the configured sizes.
pub fn run_verification(cfg: &UmbrellaConfig) -> UmbrellaReport {
    let values = axis_values(cfg.height);
    let axis_count = values.len();

    // Exhaustive grid scan: singular locus, section zero locus, and their
    // pointwise equivalence.
    let mut singular_points = Vec::new();
    let mut s1_zero_points = Vec::new();
    let mut mismatches = 0u64;
    let mut points = 0u64;
    for &x in &values {
        for &t1 in &values {
            for &t2 in &values {
                for &t3 in &values {
                    points += 1;
                    let (rank7, s1_zero) = grid_point_ranks(x, [t1, t2, t3]);
                    let singular = rank7 == 3;
                    let is_origin = x.num == 0 && t1.num == 0 && t2.num == 0 && t3.num == 0;
                    if singular != s1_zero || (singular && !is_origin) {
                        mismatches += 1;
                    }
                    let display = || {
                        format!(
                            "{};{};{};{}",
                            x.display(),
                            t1.display(),
                            t2.display(),
                            t3.display()
                        )
                    };
                    if singular {
                        singular_points.push(display());
                    }
                    if s1_zero {
                        s1_zero_points.push(display());
                    }
                }
            }
        }
    }

    let origin = SourcePoint::origin();
    let origin_rank = jacobian_rank(&origin, false);
    let origin_lift_rank = jacobian_rank(&origin, true);
    let sigma2_empty = sigma2_empty_check();
    let negative_control = sigma2_empty_check_for(Germ::CubicControl);

    // Deterministic random pairs: distinct sources must have distinct
    // lifted images, and the coordinate inversion must round-trip.
    let mut state = cfg.seed;
    let mut collisions = 0usize;
    let mut inversion_failures = 0usize;
    let mut pairs_checked = 0usize;
    while pairs_checked < cfg.pair_samples {
        let p = random_point(&mut state);
        let q = random_point(&mut state);
        if p == q {
            continue;
        }
        pairs_checked += 1;
        let lp = lift_map(&p);
        if lp == lift_map(&q) {
            collisions += 1;
        }
        if invert_lift(&lp) != p {
            inversion_failures += 1;
        }
    }

    // Boundary-sphere sweep: scale deduplicated grid rays to the unit
    // sphere of the target and frame the normal bundle at each sample.
    let gap = BigRational::new(1.into(), 1_000_000_000i64.into());
    let direction_values = axis_values(cfg.height.min(3));
    let mut seen_rays = BTreeSet::new();
    let mut sphere_points = 0usize;
    let mut membership_violations = 0usize;
    let mut frame_failures = Vec::new();
    'outer: for &x in &direction_values {
        for &t1 in &direction_values {
            for &t2 in &direction_values {
                for &t3 in &direction_values {
                    if sphere_points == cfg.sphere_samples {
                        break 'outer;
                    }
                    if x.num == 0 && t1.num == 0 && t2.num == 0 && t3.num == 0 {
                        continue;
                    }
                    let direction = SourcePoint::new(
                        x.to_rational(),
                        [t1.to_rational(), t2.to_rational(), t3.to_rational()],
                    );
                    if !seen_rays.insert(ray_key(&direction.coords())) {
                        continue;
                    }
                    let sample = scale_to_boundary(&direction, &gap);
                    sphere_points += 1;
                    let norm = image_norm_squared(&sample);
                    if norm > BigRational::one() || norm < &BigRational::one() - &gap {
                        membership_violations += 1;
                    }
                    if let Err(err) = framing_frame(&sample, cfg.tolerance) {
                        frame_failures.push(format!("{}: {err}", sample.display()));
                    }
                }
            }
        }
    }

    let origin_display = "0;0;0;0".to_string();
    let pass = singular_points == vec![origin_display.clone()]
        && s1_zero_points == vec![origin_display]
        && mismatches == 0
        && origin_rank == 3
        && origin_lift_rank == 4
        && sigma2_empty
        && !negative_control
        && collisions == 0
        && inversion_failures == 0
        && membership_violations == 0
        && frame_failures.is_empty()
        && sphere_points == cfg.sphere_samples;

    UmbrellaReport {
        config: cfg.clone(),
        grid: GridSummary {
            axis_scheme: format!(
                "integers 0, +-1..+-{h} and unit fractions +-1/2..+-1/{h}",
                h = cfg.height
            ),
            axis_values: axis_count,
            points,
        },
        singular_points,
        s1_zero_points,
        rank_equivalence_mismatches: mismatches,
        origin_rank,
        origin_lift_rank,
        sigma2_empty,
        negative_control_sigma2_empty: negative_control,
        lift_pairs_checked: pairs_checked,
        lift_collisions: collisions,
        lift_inversion_failures: inversion_failures,
        sphere: SphereSummary {
            boundary_gap: gap.to_string(),
            points: sphere_points,
            membership_violations,
            frame_failures,
        },
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::umbrella::section::s1_vanishes_for;

    #[test]
    fn axis_values_are_reduced_and_sorted() {
        let values = axis_values(4);
        assert_eq!(values.len(), 1 + 2 * 4 + 2 * 3);
        for w in values.windows(2) {
            assert!(w[0].num * w[1].den < w[1].num * w[0].den);
        }
        assert!(values.iter().all(|v| v.num.gcd(&v.den) == 1));
    }

    #[test]
    fn fast_path_agrees_with_the_general_rank() {
        let values = axis_values(2);
        for &x in &values {
            for &t1 in &values {
                let t = [
                    t1,
                    AxisValue { num: 0, den: 1 },
                    AxisValue { num: 1, den: 2 },
                ];
                let (rank7, s1_zero) = grid_point_ranks(x, t);
                let p = SourcePoint::new(
                    x.to_rational(),
                    [t[0].to_rational(), t[1].to_rational(), t[2].to_rational()],
                );
                assert_eq!(rank7, jacobian_rank(&p, false));
                assert_eq!(s1_zero, s1_vanishes_for(Germ::CrossCap, &p));
            }
        }
    }

    #[test]
    fn small_height_verification_passes() {
        let cfg = UmbrellaConfig {
            height: 2,
            sphere_samples: 25,
            pair_samples: 200,
            ..UmbrellaConfig::default()
        };
        let report = run_verification(&cfg);
        assert!(report.pass, "report: {report:?}");
        assert_eq!(report.singular_points, vec!["0;0;0;0"]);
        // 4h - 1 axis values: 0, the integers up to h, the unit fractions.
        assert_eq!(report.grid.points, 7u64.pow(4));
    }

    #[test]
    fn boundary_scaling_lands_in_the_band() {
        let gap = BigRational::new(1.into(), 1_000_000i64.into());
        let direction = SourcePoint::from_integers(3, [1, -2, 5]);
        let sample = scale_to_boundary(&direction, &gap);
        let norm = image_norm_squared(&sample);
        assert!(norm <= BigRational::one());
        assert!(norm >= &BigRational::one() - &gap);
    }

    #[test]
    fn random_points_are_deterministic() {
        let mut a = 42u64;
        let mut b = 42u64;
        for _ in 0..16 {
            assert_eq!(random_point(&mut a), random_point(&mut b));
        }
    }
}
