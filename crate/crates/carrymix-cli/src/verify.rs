//! Verification groups behind `carrymix verify <target>`. Each group runs
//! a battery of exact identity checks (statistical checks carry explicit
//! thresholds) and reports one line per check. `--quick` shrinks every
//! grid but never removes a check kind.

use std::collections::BTreeMap;

use carrymix::bijections::{
    bar_inverse, bar_map, carry_positions, column_carry_trace, descent_positions, rank_label,
    shuffle_trace, star_inverse, star_map, star_product_check, ColumnArray,
};
use carrymix::carries::{self, ChainSpec};
use carrymix::exact::{
    binomial, char_poly, frac, int_pow, is_totally_positive, poly_from_roots, rat,
    row_times_matrix, to_f64, Matrix, Rat,
};
use carrymix::montecarlo::{
    chi_square, chi_square_quantile, empirical_joint_carries, exhaustive_joint_carries,
    exhaustive_joint_descents, markov_product_law, seeded_rng,
};
use carrymix::mult::{self, MultSpec};
use carrymix::shuffling::{
    all_permutations, card_tracking_matrix, exhaustive_shuffle_dist, gsr_riffle_sample, gsr_sample,
    qb_probability, Permutation,
};
use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;
use serde_json::json;

pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn ok(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: true,
            detail: String::new(),
        }
    }

    fn of(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

fn all_equal<T: PartialEq, I: IntoIterator<Item = (T, T, String)>>(name: &str, cases: I) -> Check {
    for (left, right, label) in cases {
        if left != right {
            return Check::of(name, false, format!("mismatch at {label}"));
        }
    }
    Check::ok(name)
}

fn three_addend_matrix(b: i64) -> Matrix {
    let d = 6 * b * b;
    Matrix::from_rows(vec![
        vec![
            frac(b * b + 3 * b + 2, d),
            frac(4 * b * b - 4, d),
            frac(b * b - 3 * b + 2, d),
        ],
        vec![
            frac(b * b - 1, d),
            frac(4 * b * b + 2, d),
            frac(b * b - 1, d),
        ],
        vec![
            frac(b * b - 3 * b + 2, d),
            frac(4 * b * b - 4, d),
            frac(b * b + 3 * b + 2, d),
        ],
    ])
    .unwrap()
}

fn three_card_matrix(b: i64) -> Matrix {
    let d = 6 * b * b;
    Matrix::from_rows(vec![
        vec![
            frac((b + 1) * (2 * b + 1), d),
            frac(2 * (b * b - 1), d),
            frac((b - 1) * (2 * b - 1), d),
        ],
        vec![
            frac(2 * (b * b - 1), d),
            frac(2 * (b * b + 2), d),
            frac(2 * (b * b - 1), d),
        ],
        vec![
            frac((b - 1) * (2 * b - 1), d),
            frac(2 * (b * b - 1), d),
            frac((b + 1) * (2 * b + 1), d),
        ],
    ])
    .unwrap()
}

fn inverse_power_poly(n: usize, b: u64) -> Vec<Rat> {
    poly_from_roots(
        &(0..n as u32)
            .map(|k| Rat::new(BigInt::one(), int_pow(b, k)))
            .collect::<Vec<_>>(),
    )
}

pub fn golden_checks(quick: bool) -> Vec<Check> {
    let bases: Vec<i64> = if quick {
        vec![2, 3]
    } else {
        (2..=10).collect()
    };
    let n_max = if quick { 4 } else { 8 };
    let card_bases: Vec<i64> = if quick { vec![2, 3] } else { (2..=6).collect() };
    let mut checks = Vec::new();

    checks.push(all_equal(
        "golden three-addend matrix",
        bases.iter().map(|&b| {
            (
                carries::transition_matrix(&ChainSpec::new(3, b as u64).unwrap()),
                three_addend_matrix(b),
                format!("b={b}"),
            )
        }),
    ));

    let mut binary_ok = true;
    let mut detail = String::new();
    'outer: for n in 1..=n_max {
        let p = carries::transition_matrix(&ChainSpec::new(n, 2).unwrap());
        let denom = int_pow(2, n as u32);
        for i in 0..n {
            for j in 0..n {
                let expected = Rat::new(
                    binomial(n as i64 + 1, 2 * j as i64 - i as i64 + 1),
                    denom.clone(),
                );
                if p.get(i, j) != &expected {
                    binary_ok = false;
                    detail = format!("n={n} entry ({i},{j})");
                    break 'outer;
                }
            }
        }
    }
    checks.push(Check::of("golden binary closed form", binary_ok, detail));

    let golden_rows: [[i64; 7]; 7] = [
        [2, 1, 2, 1, 2, 1, 1],
        [2, 1, 2, 1, 1, 2, 1],
        [2, 1, 1, 2, 1, 2, 1],
        [1, 2, 1, 2, 1, 2, 1],
        [1, 2, 1, 2, 1, 1, 2],
        [1, 2, 1, 1, 2, 1, 2],
        [1, 1, 2, 1, 2, 1, 2],
    ];
    let expected = Matrix::from_rows(
        golden_rows
            .iter()
            .map(|row| row.iter().map(|&v| frac(v, 10)).collect())
            .collect(),
    )
    .unwrap();
    checks.push(Check::of(
        "golden multiplication matrix (k=7, b=10)",
        mult::transition_matrix(&MultSpec::new(7, 10).unwrap()) == expected,
        "",
    ));

    checks.push(all_equal(
        "golden card-tracking matrices",
        card_bases.iter().flat_map(|&b| {
            let two = Matrix::from_rows(vec![
                vec![frac(b + 1, 2 * b), frac(b - 1, 2 * b)],
                vec![frac(b - 1, 2 * b), frac(b + 1, 2 * b)],
            ])
            .unwrap();
            vec![
                (card_tracking_matrix(2, b as u64), two, format!("n=2 b={b}")),
                (
                    card_tracking_matrix(3, b as u64),
                    three_card_matrix(b),
                    format!("n=3 b={b}"),
                ),
            ]
        }),
    ));
    checks
}

pub fn stationary_checks(quick: bool) -> Vec<Check> {
    let n_max = if quick { 4 } else { 6 };
    let bases: &[u64] = if quick { &[2, 3] } else { &[2, 3, 5, 10] };
    let mut cases = Vec::new();
    for n in 1..=n_max {
        let pi = carries::stationary(n);
        for &b in bases {
            let p = carries::transition_matrix(&ChainSpec::new(n, b).unwrap());
            cases.push((
                row_times_matrix(&pi, &p).unwrap(),
                pi.clone(),
                format!("n={n} b={b}"),
            ));
        }
    }
    vec![all_equal("stationary vector fixed for every base", cases)]
}

pub fn eigen_checks(quick: bool) -> Vec<Check> {
    let n_max = if quick { 4 } else { 6 };
    let bases: &[u64] = if quick { &[2] } else { &[2, 3] };
    let mut cases = Vec::new();
    for n in 1..=n_max {
        for &b in bases {
            let expected = inverse_power_poly(n, b);
            cases.push((
                char_poly(&carries::transition_matrix(&ChainSpec::new(n, b).unwrap())).unwrap(),
                expected.clone(),
                format!("carries n={n} b={b}"),
            ));
            cases.push((
                char_poly(&card_tracking_matrix(n, b)).unwrap(),
                expected,
                format!("card n={n} b={b}"),
            ));
        }
    }
    vec![all_equal("eigenvalues 1, 1/b, .., 1/b^(n-1)", cases)]
}

pub fn semigroup_checks(quick: bool) -> Vec<Check> {
    let factors: &[u64] = if quick { &[2, 3] } else { &[2, 3, 4] };
    let n_max = if quick { 3 } else { 5 };
    let k_max = if quick { 5 } else { 9 };
    let mut carries_cases = Vec::new();
    let mut card_cases = Vec::new();
    let mut mult_cases = Vec::new();
    for &a in factors {
        for &b in factors {
            for n in 1..=n_max {
                let pa = carries::transition_matrix(&ChainSpec::new(n, a).unwrap());
                let pb = carries::transition_matrix(&ChainSpec::new(n, b).unwrap());
                carries_cases.push((
                    pa.mul(&pb).unwrap(),
                    carries::transition_matrix(&ChainSpec::new(n, a * b).unwrap()),
                    format!("n={n} {a}x{b}"),
                ));
                card_cases.push((
                    card_tracking_matrix(n, a)
                        .mul(&card_tracking_matrix(n, b))
                        .unwrap(),
                    card_tracking_matrix(n, a * b),
                    format!("n={n} {a}x{b}"),
                ));
            }
            for k in 1..=k_max {
                let ka = mult::transition_matrix(&MultSpec::new(k, a).unwrap());
                let kb = mult::transition_matrix(&MultSpec::new(k, b).unwrap());
                mult_cases.push((
                    ka.mul(&kb).unwrap(),
                    mult::transition_matrix(&MultSpec::new(k, a * b).unwrap()),
                    format!("k={k} {a}x{b}"),
                ));
            }
        }
    }
    vec![
        all_equal("carries semigroup P_a P_b = P_ab", carries_cases),
        all_equal("card-tracking semigroup Q_a Q_b = Q_ab", card_cases),
        all_equal("multiplication semigroup K_a K_b = K_ab", mult_cases),
    ]
}

pub fn tp2_checks(quick: bool) -> Vec<Check> {
    let n_max = if quick { 5 } else { 8 };
    let b_max = if quick { 5 } else { 10 };
    let binary_order = if quick { 3 } else { 4 };
    let mut checks = Vec::new();
    let mut pass = true;
    let mut detail = String::new();
    for n in 1..=n_max {
        for b in 2..=b_max {
            let p = carries::transition_matrix(&ChainSpec::new(n, b).unwrap());
            if !is_totally_positive(&p, 2) {
                pass = false;
                detail = format!("n={n} b={b}");
            }
        }
    }
    checks.push(Check::of("all 2x2 minors nonnegative", pass, detail));
    let mut pass = true;
    let mut detail = String::new();
    for n in 1..=n_max {
        let p = carries::transition_matrix(&ChainSpec::new(n, 2).unwrap());
        if !is_totally_positive(&p, binary_order) {
            pass = false;
            detail = format!("n={n}");
        }
    }
    checks.push(Check::of(
        format!("base-2 minors nonnegative to order {binary_order}"),
        pass,
        detail,
    ));
    checks
}

pub fn theorem_main_checks(quick: bool) -> Vec<Check> {
    let grids: &[(usize, usize, u64)] = if quick {
        &[(2, 2, 2), (3, 2, 2)]
    } else {
        &[(2, 2, 2), (3, 2, 2), (2, 2, 3), (2, 3, 2)]
    };
    let mut cases = Vec::new();
    let mut product_cases = Vec::new();
    for &(n, m, b) in grids {
        let by_carries = exhaustive_joint_carries(n, m, b).unwrap();
        let by_descents = exhaustive_joint_descents(n, m, b).unwrap();
        let by_chain = markov_product_law(n, m, b);
        product_cases.push((by_carries.clone(), by_chain, format!("({n},{m},{b})")));
        cases.push((by_carries, by_descents, format!("({n},{m},{b})")));
    }
    vec![
        all_equal("joint carries law = joint descents law", cases),
        all_equal("joint law factors through the chain", product_cases),
    ]
}

/// Standalone theorem-main run: emits the JSON report the CLI prints for
/// `verify theorem-main`, plus the pass/fail outcome.
pub fn theorem_main_report(
    n: usize,
    m: usize,
    b: u64,
    exhaustive: bool,
    samples: u64,
    seed: Option<u64>,
) -> Result<(serde_json::Value, bool), carrymix::Error> {
    if exhaustive {
        let by_carries = exhaustive_joint_carries(n, m, b)?;
        let by_descents = exhaustive_joint_descents(n, m, b)?;
        let equal = by_carries == by_descents;
        Ok((
            json!({
                "mode": "exhaustive",
                "carries_law": by_carries.to_json(),
                "descents_law": by_descents.to_json(),
                "equal": equal,
            }),
            equal,
        ))
    } else {
        let seed = seed.expect("caller enforces seed presence");
        let expected = exhaustive_joint_carries(n, m, b)?;
        let observed = empirical_joint_carries(n, m, b, samples, seed);
        let report = chi_square(&observed, &expected)?;
        let threshold = chi_square_quantile(report.dof, 0.999);
        let pass = report.statistic < threshold;
        Ok((
            json!({
                "mode": "montecarlo",
                "samples": samples,
                "seed": seed,
                "generator": observed.generator,
                "exact_law": expected.to_json(),
                "observed_counts": observed.to_json(),
                "chi_square": report.to_json(),
                "threshold_0_999": threshold,
                "pass": pass,
            }),
            pass,
        ))
    }
}

pub fn bijections_checks(quick: bool) -> Vec<Check> {
    let random_count = if quick { 100 } else { 1000 };
    let mut arrays = Vec::new();
    for bits in 0..16u32 {
        let rows = vec![
            vec![(bits >> 3) & 1, (bits >> 2) & 1],
            vec![(bits >> 1) & 1, bits & 1],
        ];
        arrays.push(ColumnArray::from_rows(2, rows).unwrap());
    }
    let mut rng = seeded_rng(0xB17E5);
    for _ in 0..random_count {
        let n = rng.random_range(1..=6);
        let m = rng.random_range(1..=4);
        let b = rng.random_range(2..=4u64);
        let rows = (0..n)
            .map(|_| (0..m).map(|_| rng.random_range(0..b) as u32).collect())
            .collect();
        arrays.push(ColumnArray::from_rows(b, rows).unwrap());
    }

    let mut round_trip = true;
    let mut positions = true;
    for array in &arrays {
        if &bar_inverse(&bar_map(array)) != array || &star_inverse(&star_map(array)) != array {
            round_trip = false;
        }
        let barred = bar_map(array);
        if descent_positions(&barred) != carry_positions(&array.tuples())
            || rank_label(&barred).descent_positions() != descent_positions(&barred)
        {
            positions = false;
        }
    }

    let mut product = true;
    for bits in 0..64u32 {
        let rows = (0..3)
            .map(|i| vec![(bits >> (2 * i + 1)) & 1, (bits >> (2 * i)) & 1])
            .collect();
        let array = ColumnArray::from_rows(2, rows).unwrap();
        if !star_product_check(&array) {
            product = false;
        }
    }

    let example = ColumnArray::from_rows(
        3,
        vec![
            vec![0, 1, 2],
            vec![0, 1, 2],
            vec![1, 1, 2],
            vec![1, 1, 1],
            vec![2, 1, 2],
            vec![1, 2, 1],
        ],
    )
    .unwrap();
    let trace = shuffle_trace(&example);
    let expected_taus = [
        vec![6, 3, 1, 4, 2, 5],
        vec![4, 1, 5, 2, 6, 3],
        vec![1, 3, 6, 4, 2, 5],
    ];
    let worked = column_carry_trace(&example) == vec![3, 3, 2]
        && trace
            .perms
            .iter()
            .zip(expected_taus)
            .all(|(p, imgs)| p == &Permutation::from_one_line(imgs).unwrap());

    vec![
        Check::of("bar and star maps round-trip", round_trip, ""),
        Check::of(
            "carry positions = descent positions = label descents",
            positions,
            "",
        ),
        Check::of("labeling product law on the binary grid", product, ""),
        Check::of("worked six-row example reproduced", worked, ""),
    ]
}

/// Bijection checks pinned to one array shape: every array of that shape
/// when `seed` is `None`, otherwise `samples` seeded random arrays.
pub fn bijections_shape_checks(
    n: usize,
    m: usize,
    b: u64,
    seed: Option<u64>,
    samples: u64,
) -> Result<Vec<Check>, carrymix::Error> {
    if n < 1 || m < 1 || b < 2 {
        return Err(carrymix::Error::Invalid(
            "need n >= 1, m >= 1, b >= 2".into(),
        ));
    }
    let mut arrays = Vec::new();
    match seed {
        None => {
            let total = (b as f64).powi((n * m) as i32);
            if total > 10_000_000.0 {
                return Err(carrymix::Error::ResourceCap(format!(
                    "b^(n*m) = {b}^{} exceeds 10000000 arrays",
                    n * m
                )));
            }
            let mut flat = vec![0u32; n * m];
            'enumerate: loop {
                let rows = (0..n)
                    .map(|i| (0..m).map(|j| flat[i * m + j]).collect())
                    .collect();
                arrays.push(ColumnArray::from_rows(b, rows).expect("digits in range"));
                let mut pos = 0;
                loop {
                    if pos == flat.len() {
                        break 'enumerate;
                    }
                    flat[pos] += 1;
                    if (flat[pos] as u64) < b {
                        break;
                    }
                    flat[pos] = 0;
                    pos += 1;
                }
            }
        }
        Some(seed) => {
            let mut rng = seeded_rng(seed);
            for _ in 0..samples {
                let rows = (0..n)
                    .map(|_| (0..m).map(|_| rng.random_range(0..b) as u32).collect())
                    .collect();
                arrays.push(ColumnArray::from_rows(b, rows).expect("digits in range"));
            }
        }
    }

    let mut round_trip = true;
    let mut positions = true;
    let mut product = true;
    let mut trace_identity = true;
    for array in &arrays {
        if &bar_inverse(&bar_map(array)) != array || &star_inverse(&star_map(array)) != array {
            round_trip = false;
        }
        let barred = bar_map(array);
        if descent_positions(&barred) != carry_positions(&array.tuples())
            || rank_label(&barred).descent_positions() != descent_positions(&barred)
        {
            positions = false;
        }
        if !star_product_check(array) {
            product = false;
        }
        let kappa = column_carry_trace(array);
        let trace = shuffle_trace(array);
        if trace
            .perms
            .iter()
            .zip(&kappa)
            .any(|(p, &k)| p.descents() as u32 != k)
        {
            trace_identity = false;
        }
    }

    let scope = match seed {
        None => format!("all {} arrays", arrays.len()),
        Some(seed) => format!("{} seeded arrays (seed {seed})", arrays.len()),
    };
    Ok(vec![
        Check::of(
            format!("bar and star maps round-trip on {scope}"),
            round_trip,
            "",
        ),
        Check::of(
            "carry positions = descent positions = label descents",
            positions,
            "",
        ),
        Check::of("labeling product law holds", product, ""),
        Check::of("trace descents equal carries pointwise", trace_identity, ""),
    ])
}

pub fn separation_checks(quick: bool) -> Vec<Check> {
    let n_max = if quick { 5 } else { 8 };
    let r_max = if quick { 4 } else { 6 };
    let mut route_cases = Vec::new();
    let mut monotone = true;
    for n in 1..=n_max {
        for b in [2u64, 3] {
            let spec = ChainSpec::new(n, b).unwrap();
            for r in 0..=r_max {
                route_cases.push((
                    carries::separation_exact(&spec, r),
                    carries::separation_closed(&spec, r),
                    format!("n={n} b={b} r={r}"),
                ));
                let ratios = carries::stationarity_ratios(&spec, r);
                if ratios.windows(2).any(|w| w[1] > w[0]) {
                    monotone = false;
                }
            }
        }
    }
    let mut checks = vec![
        all_equal(
            "separation: matrix power route = closed product",
            route_cases,
        ),
        Check::of("stationarity ratio profile non-increasing", monotone, ""),
    ];
    let spec = ChainSpec::new(512, 2).unwrap();
    let grid: &[(u64, f64)] = if quick {
        &[(18, 1.0)]
    } else {
        &[(16, 0.25), (18, 1.0), (20, 4.0)]
    };
    let mut asym = true;
    let mut detail = String::new();
    for &(r, c) in grid {
        let sep = carries::separation_closed_f64(&spec, r);
        let limit = 1.0 - (-1.0 / (2.0 * c)).exp();
        if (sep - limit).abs() >= 0.01 {
            asym = false;
            detail = format!("c={c}: sep {sep} vs limit {limit}");
        }
    }
    checks.push(Check::of(
        "closed separation near 1 - e^(-1/2c) at n=512",
        asym,
        detail,
    ));
    checks
}

pub fn moments_checks(quick: bool) -> Vec<Check> {
    let n_max = if quick { 4 } else { 8 };
    let b_max = if quick { 3 } else { 5 };
    let j_max = if quick { 3 } else { 6 };
    let mut pass = true;
    let mut detail = String::new();
    for n in 1..=n_max {
        for b in 2..=b_max {
            let spec = ChainSpec::new(n, b).unwrap();
            for j in 1..=j_max {
                if carries::carry_moments(&spec, j).is_err() {
                    pass = false;
                    detail = format!("n={n} b={b} j={j}");
                }
            }
            let _ = carries::total_carries_mean(&spec, j_max);
        }
    }
    vec![Check::of(
        "closed-form moments equal exact chain moments",
        pass,
        detail,
    )]
}

pub fn shuffle_law_checks(quick: bool) -> Vec<Check> {
    let n_max = if quick { 4 } else { 5 };
    let mut law_cases = Vec::new();
    for n in 1..=n_max {
        for b in [2u64, 3] {
            let dist = exhaustive_shuffle_dist(n, b).unwrap();
            for p in all_permutations(n) {
                let label = format!("n={n} b={b} sigma={p}");
                law_cases.push((dist.probability(&p), qb_probability(&p, b), label));
            }
        }
    }
    let mut checks = vec![all_equal(
        "exhaustive shuffle law matches closed formula",
        law_cases,
    )];

    let samples: u64 = if quick { 20_000 } else { 100_000 };
    let n = 4usize;
    let mut rng = seeded_rng(0x5EED_CAFE);
    let mut counts_digits: BTreeMap<Permutation, u64> = BTreeMap::new();
    let mut counts_riffle: BTreeMap<Permutation, u64> = BTreeMap::new();
    for _ in 0..samples {
        *counts_digits.entry(gsr_sample(n, 2, &mut rng)).or_insert(0) += 1;
        *counts_riffle
            .entry(gsr_riffle_sample(n, &mut rng))
            .or_insert(0) += 1;
    }
    let mut pass = true;
    let mut detail = String::new();
    for p in all_permutations(n) {
        let expected = to_f64(&qb_probability(&p, 2));
        let tolerance = 4.0 * (expected * (1.0 - expected) / samples as f64).sqrt();
        for (variant, counts) in [("digits", &counts_digits), ("riffle", &counts_riffle)] {
            let freq = counts.get(&p).copied().unwrap_or(0) as f64 / samples as f64;
            if (freq - expected).abs() > tolerance {
                pass = false;
                detail = format!("{variant} sampler off for {p}");
            }
        }
    }
    checks.push(Check::of(
        format!("both samplers within 4 standard errors over {samples} draws"),
        pass,
        detail,
    ));
    checks
}

pub fn mult_checks(quick: bool) -> Vec<Check> {
    let k_max = if quick { 6 } else { 12 };
    let b_max = if quick { 6 } else { 12 };
    let r_max = if quick { 3 } else { 4 };
    let mut structure = true;
    let mut bound = true;
    let mut detail_structure = String::new();
    let mut detail_bound = String::new();
    for k in 1..=k_max {
        for b in 2..=b_max {
            let spec = MultSpec::new(k, b).unwrap();
            let m = mult::transition_matrix(&spec);
            let side = k as usize;
            let shift = (b % k) as usize;
            let circulant = (0..side.saturating_sub(1))
                .all(|c| (0..side).all(|r| m.get((r + shift) % side, c + 1) == m.get(r, c)));
            if !m.is_doubly_stochastic() || !circulant {
                structure = false;
                detail_structure = format!("k={k} b={b}");
            }
            for r in 1..=r_max {
                let tv = mult::tv_exact(&spec, r);
                if tv > Rat::new(BigInt::from(k), 2 * int_pow(b, r as u32)) {
                    bound = false;
                    detail_bound = format!("k={k} b={b} r={r}");
                }
            }
        }
    }

    let counting_grid: &[(u64, u64, u64)] = if quick {
        &[(7, 10, 4), (3, 2, 13)]
    } else {
        &[(7, 10, 6), (26, 10, 5), (3, 2, 19), (12, 12, 5)]
    };
    let mut counting_cases = Vec::new();
    for &(k, b, r_top) in counting_grid {
        let spec = MultSpec::new(k, b).unwrap();
        let m = mult::transition_matrix(&spec);
        for r in 1..=r_top {
            counting_cases.push((
                mult::carry_row_by_counting(&spec, r).unwrap(),
                m.pow(r).unwrap().row(0).to_vec(),
                format!("k={k} b={b} r={r}"),
            ));
        }
    }

    let spec = MultSpec::new(26, 10).unwrap();
    let worked = mult::carry_trace(&spec, &[3, 2, 4, 1]).unwrap() == vec![7, 5, 10, 3];

    vec![
        Check::of(
            "doubly stochastic generalized circulant",
            structure,
            detail_structure,
        ),
        Check::of("TV distance within k/(2 b^r)", bound, detail_bound),
        all_equal("counting identity = matrix powers", counting_cases),
        Check::of("worked multiplication trace (k=26)", worked, ""),
    ]
}

pub fn sections_checks(quick: bool) -> Vec<Check> {
    use carrymix::sections::{apply_section, trim_to_transition, HPolynomial};
    let n_max = if quick { 3 } else { 6 };
    let b_max = if quick { 3 } else { 5 };
    let mut trim_cases = Vec::new();
    for n in 1..=n_max {
        for b in 2..=b_max {
            trim_cases.push((
                trim_to_transition(n, b).unwrap(),
                carries::transition_matrix(&ChainSpec::new(n, b).unwrap()),
                format!("n={n} b={b}"),
            ));
        }
    }
    let oracle_n = if quick { 3 } else { 4 };
    let oracle_r = if quick { 3 } else { 4 };
    for n in 0..=oracle_n {
        for r in 1..=oracle_r as u64 {
            let coeffs: Vec<Rat> = (0..n + 2)
                .map(|i| {
                    if n >= 1 && i >= 1 {
                        rat(carrymix::exact::eulerian(n as u64, i as i64 - 1))
                    } else if n == 0 && i == 0 {
                        rat(1)
                    } else {
                        rat(0)
                    }
                })
                .collect();
            // apply_section panics on any disagreement with the series
            // route, so completing the loop is the check
            let h = HPolynomial::new(n, coeffs).unwrap();
            let _ = apply_section(&h, r);
            let mixed: Vec<i64> = (0..n as i64 + 2).map(|i| (5 * i + 2) % 11 - 3).collect();
            let _ = apply_section(&HPolynomial::from_integers(n, &mixed).unwrap(), r);
        }
    }
    vec![
        all_equal("trimmed sectioning matrix = carries matrix", trim_cases),
        Check::ok("sectioned numerators generate the sub-series"),
    ]
}

pub fn card_checks(quick: bool) -> Vec<Check> {
    let bases: Vec<i64> = if quick { vec![2, 3] } else { (2..=6).collect() };
    let n_max = if quick { 4 } else { 6 };
    let mut golden_cases = Vec::new();
    for &b in &bases {
        let two = Matrix::from_rows(vec![
            vec![frac(b + 1, 2 * b), frac(b - 1, 2 * b)],
            vec![frac(b - 1, 2 * b), frac(b + 1, 2 * b)],
        ])
        .unwrap();
        golden_cases.push((card_tracking_matrix(2, b as u64), two, format!("n=2 b={b}")));
        golden_cases.push((
            card_tracking_matrix(3, b as u64),
            three_card_matrix(b),
            format!("n=3 b={b}"),
        ));
    }
    let mut uniform = true;
    for n in 1..=n_max {
        for b in [2u64, 3, 4] {
            let q = card_tracking_matrix(n, b);
            let pi = vec![frac(1, n as i64); n];
            if !q.is_doubly_stochastic() || row_times_matrix(&pi, &q).unwrap() != pi {
                uniform = false;
            }
        }
    }
    vec![
        all_equal("golden card-tracking displays", golden_cases),
        Check::of("doubly stochastic with uniform stationary law", uniform, ""),
    ]
}

/// Everything `verify all` runs, in reporting order.
pub fn all_checks(quick: bool) -> Vec<Check> {
    let mut checks = Vec::new();
    checks.extend(golden_checks(quick));
    checks.extend(stationary_checks(quick));
    checks.extend(eigen_checks(quick));
    checks.extend(semigroup_checks(quick));
    checks.extend(tp2_checks(quick));
    checks.extend(theorem_main_checks(quick));
    checks.extend(bijections_checks(quick));
    checks.extend(separation_checks(quick));
    checks.extend(moments_checks(quick));
    checks.extend(shuffle_law_checks(quick));
    checks.extend(mult_checks(quick));
    checks.extend(sections_checks(quick));
    checks.extend(card_checks(quick));
    checks
}
