//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use qmsets::{
    apply_map, born_distribution, cascade_distribution, csca_measure, dit, enumerate_partitions,
    generate_group, inverse_image_partition, is_csca, is_nonsingular, join, measure_distribution,
    measure_sample, norm, orbit_partition, pythagoras_check, Attribute, AttributeSet, Basis,
    LinearMap, Permutation, SetKet, SetPartition, Universe, Value,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn universe(n: usize) -> Universe {
    Universe::new((0..n).map(|i| ((b'a' + i as u8) as char).to_string())).unwrap()
}

/// Every function `U -> {0..k-1}` as a value vector.
fn functions(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..k).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn attribute(u: &Universe, name: &str, values: &[usize]) -> Attribute {
    Attribute::from_values(
        name,
        u,
        values.iter().map(|&v| Value::int(v as i64)).collect(),
    )
    .unwrap()
}

// 1 ---------------------------------------------------------------------

const PAPER_TABLE: &str = "\
# ket-table U U' U''
U={a,b,c} | U'={a',b',c'} | U''={a'',b'',c''}
----------+---------------+------------------
{a,b,c}   | {c'}          | {a'',b'',c''}
{a,b}     | {a'}          | {b''}
{b,c}     | {b'}          | {b'',c''}
{a,c}     | {a',b'}       | {c''}
{a}       | {b',c'}       | {a''}
{b}       | {a',b',c'}    | {a'',b''}
{c}       | {a',c'}       | {a'',c''}
∅         | ∅             | ∅
";

fn ket_table_reproduction() -> Check {
    let scenario = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/paper_table.qms");
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_qmsets"))
        .arg(&scenario)
        .arg("--paper-order")
        .output()
        .map_err(|e| e.to_string())?;
    within(Duration::from_secs(1), start)?;
    ensure(out.status.success(), || {
        format!("exit {:?}", out.status.code())
    })?;
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let table = text.split("\n\n").next().unwrap_or_default();
    let table = format!("{table}\n");
    ensure(table == PAPER_TABLE, || format!("table differs:\n{table}"))?;
    Ok(format!(
        "8 rows x 3 columns byte-exact in {:?}",
        start.elapsed()
    ))
}

// 2 ---------------------------------------------------------------------

fn norm_example() -> Check {
    let u = universe(3);
    let prime = Basis::from_subsets(
        &u,
        "U'",
        &[
            ("a'", vec!["a", "b"]),
            ("b'", vec!["b", "c"]),
            ("c'", vec!["a", "b", "c"]),
        ],
    )
    .map_err(|e| e.to_string())?;
    let a_prime = SetKet::from_labels(&prime, &["a'"]).map_err(|e| e.to_string())?;
    let n = norm(&a_prime.to_standard()).map_err(|e| e.to_string())?;
    ensure(n.squared == 2, || format!("norm squared {}", n.squared))?;
    let printed = format!("{:.6}", n.value);
    ensure(printed == "1.414214", || format!("printed {printed}"))?;
    let scenario = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/paper_table.qms");
    let out = Command::new(env!("CARGO_BIN_EXE_qmsets"))
        .arg(&scenario)
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    ensure(
        text.contains("{a'} = {a,b} | 2            | 1.414214"),
        || format!("cli output:\n{text}"),
    )?;
    Ok("squared norm 2, printed 1.414214".into())
}

// 3 ---------------------------------------------------------------------

fn orderings(items: &[char]) -> Vec<String> {
    if items.len() == 1 {
        return vec![items[0].to_string()];
    }
    let mut out = Vec::new();
    for (i, &c) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for tail in orderings(&rest) {
            out.push(format!("{c}{tail}"));
        }
    }
    out
}

fn quotient_counting() -> Check {
    let start = Instant::now();
    let words = orderings(&['a', 'b', 'c', 'd']);
    let u = Universe::new(&words).map_err(|e| e.to_string())?;
    let f = Attribute::from_fn("first2", &u, |w| {
        let mut first: Vec<char> = w.chars().take(2).collect();
        first.sort();
        Value::token(first.into_iter().collect::<String>())
    });
    let p = inverse_image_partition(&f);
    within(Duration::from_secs(1), start)?;
    ensure(u.size() == 24, || format!("{} orderings", u.size()))?;
    let sizes: Vec<usize> = p.block_labels().iter().map(Vec::len).collect();
    ensure(sizes == [4; 6], || format!("block sizes {sizes:?}"))?;
    let abcd = u.index_of("abcd").unwrap();
    let block: BTreeSet<&str> = u.elements(p.block_of(abcd)).into_iter().collect();
    let expected: BTreeSet<&str> = ["abcd", "bacd", "abdc", "badc"].into_iter().collect();
    ensure(block == expected, || format!("block of abcd {block:?}"))?;
    Ok("6 blocks of 4; abcd ~ {abcd,bacd,abdc,badc}".into())
}

// 4 ---------------------------------------------------------------------

fn born_normalization() -> Check {
    let mut states = 0;
    for n in 1..=5 {
        let u = universe(n);
        for mask in 1..(1u64 << n) {
            let s = SetKet::standard(&u, mask).unwrap();
            let d = born_distribution(&s).map_err(|e| e.to_string())?;
            let total: Ratio<u64> = d.outcomes.iter().map(|o| o.probability).sum();
            ensure(total == Ratio::from_integer(1), || {
                format!("n={n} S={s}: total {total}")
            })?;
            let size = mask.count_ones() as u64;
            for o in &d.outcomes {
                ensure(o.probability == Ratio::new(1, size), || {
                    format!("n={n} S={s}: {o:?}")
                })?;
            }
            states += 1;
        }
    }
    Ok(format!("{states} states, every total exactly 1"))
}

// 5 ---------------------------------------------------------------------

fn pythagoras() -> Check {
    let mut cases = 0u64;
    for n in 1..=5 {
        let u = universe(n);
        for values in functions(n, 3) {
            let f = attribute(&u, "f", &values);
            let p = f.partition();
            for mask in 0..(1u64 << n) {
                let s = SetKet::standard(&u, mask).unwrap();
                let (left, right) = pythagoras_check(&p, &s).map_err(|e| e.to_string())?;
                let squared = (0..n).filter(|i| mask >> i & 1 == 1).count() as u64;
                let mut by_value = [0u64; 3];
                for i in (0..n).filter(|i| mask >> i & 1 == 1) {
                    by_value[values[i]] += 1;
                }
                let sum: u64 = by_value.iter().sum();
                ensure(left == squared && right == sum && left == right, || {
                    format!("f={values:?} S={s}: ({left},{right}) vs ({squared},{sum})")
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (attribute, state) pairs exact"))
}

// 6 ---------------------------------------------------------------------

fn repeat_certainty() -> Check {
    let mut repeats = 0u64;
    for n in 1..=5 {
        let u = universe(n);
        for values in functions(n, n) {
            let f = attribute(&u, "f", &values);
            for mask in 1..(1u64 << n) {
                let s = SetKet::standard(&u, mask).unwrap();
                let first = measure_distribution(&f, &s).map_err(|e| e.to_string())?;
                for o in &first.outcomes {
                    let again = measure_distribution(&f, &o.state).map_err(|e| e.to_string())?;
                    ensure(
                        again.probability_of(&o.value) == Ratio::from_integer(1),
                        || format!("f={values:?} S={s} r={}", o.value),
                    )?;
                    let post = &again.outcome(&o.value).unwrap().state;
                    ensure(post == &o.state, || {
                        format!("post-state moved: {} -> {post}", o.state)
                    })?;
                    repeats += 1;
                }
            }
        }
    }
    Ok(format!(
        "{repeats} repeated measurements certain and unchanged"
    ))
}

// 7 ---------------------------------------------------------------------

fn brute_dits(p: &SetPartition) -> BTreeSet<(usize, usize)> {
    let n = p.universe().size();
    let mut out = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            if p.block_of(a) & (1 << b) == 0 {
                out.insert((a, b));
            }
        }
    }
    out
}

fn dit_join_law() -> Check {
    let mut at_four = 0;
    let mut total = 0;
    for n in 1..=4 {
        let u = universe(n);
        let all = enumerate_partitions(&u, 4).map_err(|e| e.to_string())?;
        for p in &all {
            for q in &all {
                let j = join(p, q).map_err(|e| e.to_string())?;
                let lhs: BTreeSet<_> = dit(&j).pairs().into_iter().collect();
                let rhs: BTreeSet<_> = brute_dits(p).union(&brute_dits(q)).copied().collect();
                ensure(lhs == rhs, || format!("{p} v {q}"))?;
                total += 1;
                if n == 4 {
                    at_four += 1;
                }
            }
        }
    }
    ensure(at_four == 225, || format!("{at_four} pairs at n=4"))?;
    Ok(format!("{total} pairs, 225 at |U|=4"))
}

// 8 ---------------------------------------------------------------------

fn type2_characterization() -> Check {
    let start = Instant::now();
    let mut summary = Vec::new();
    for n in 1..=4usize {
        let u = universe(n);
        let basis = Basis::standard(&u);
        let kets: Vec<SetKet> = (0..1u64 << n)
            .map(|m| SetKet::standard(&u, m).unwrap())
            .collect();
        let entries = n * n;
        // n <= 3: every matrix. n = 4: every 7th of the 65536 matrices.
        let stride = if n <= 3 { 1 } else { 7 };
        let (mut checked, mut nonsingular) = (0u64, 0u64);
        let mut bits = 0u64;
        while bits < 1 << entries {
            let columns: Vec<u64> = (0..n).map(|j| bits >> (j * n) & ((1 << n) - 1)).collect();
            let m = LinearMap::on_basis(&basis, columns).map_err(|e| e.to_string())?;
            let images: BTreeSet<u64> = kets
                .iter()
                .map(|k| apply_map(&m, k).map(|s| s.coords()))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let injective = images.len() == kets.len();
            ensure(is_nonsingular(&m) == injective, || {
                format!("n={n} matrix {bits:#b}")
            })?;
            checked += 1;
            nonsingular += injective as u64;
            bits += stride;
        }
        summary.push(format!("n={n}: {nonsingular}/{checked}"));
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!("{} in {:?}", summary.join(", "), start.elapsed()))
}

// 9 ---------------------------------------------------------------------

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

fn union_find_blocks(n: usize, gens: &[Vec<usize>]) -> BTreeSet<u64> {
    let mut parent: Vec<usize> = (0..n).collect();
    for g in gens {
        for (u, &v) in g.iter().enumerate() {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a] = b;
        }
    }
    let mut blocks: BTreeMap<usize, u64> = BTreeMap::new();
    for u in 0..n {
        *blocks.entry(find(&mut parent, u)).or_default() |= 1 << u;
    }
    blocks.into_values().collect()
}

fn orbit_oracle() -> Check {
    let mut groups = 0u64;
    for n in 1..=5 {
        let u = universe(n);
        let perms: Vec<Vec<usize>> =
            orderings(&(0..n).map(|i| (b'0' + i as u8) as char).collect::<Vec<_>>())
                .into_iter()
                .map(|w| w.bytes().map(|b| (b - b'0') as usize).collect())
                .collect();
        let mut catalog: Vec<Vec<Vec<usize>>> = vec![vec![]];
        catalog.extend(perms.iter().map(|p| vec![p.clone()]));
        for (i, p) in perms.iter().enumerate() {
            for q in &perms[i + 1..] {
                catalog.push(vec![p.clone(), q.clone()]);
            }
        }
        for gens in catalog {
            let ps: Vec<Permutation> = gens
                .iter()
                .map(|g| Permutation::from_images(&u, g.clone()))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let g = generate_group(&u, &ps, 120).map_err(|e| e.to_string())?;
            let got: BTreeSet<u64> = orbit_partition(&g).blocks().iter().copied().collect();
            let want = union_find_blocks(n, &gens);
            ensure(got == want, || format!("n={n} generators {gens:?}"))?;
            groups += 1;
        }
    }
    Ok(format!("{groups} generated groups agree with union-find"))
}

// 10 --------------------------------------------------------------------

fn monte_carlo() -> Check {
    let start = Instant::now();
    let u = universe(3);
    let f = attribute(&u, "f", &[1, 1, 2]);
    let s = SetKet::standard(&u, 0b111).unwrap();
    let exact = Ratio::new(
        (0..3).filter(|&i| f.value_at(i) == &Value::int(1)).count() as u64,
        3,
    );
    ensure(exact == Ratio::new(2, 3), || format!("exact {exact}"))?;
    let samples = 100_000u64;
    let mut hits = 0u64;
    for seed in 0..samples {
        let step = measure_sample(&f, &s, seed).map_err(|e| e.to_string())?;
        hits += (step.value == Value::int(1)) as u64;
    }
    within(Duration::from_secs(5), start)?;
    let freq = hits as f64 / samples as f64;
    let target = 2.0 / 3.0;
    ensure((freq - target).abs() <= 0.01, || {
        format!("frequency {freq:.6}")
    })?;
    Ok(format!(
        "frequency {freq:.6} vs 2/3 over {samples} seeds in {:?}",
        start.elapsed()
    ))
}

// 11 --------------------------------------------------------------------

fn csca_nondegeneracy() -> Check {
    let mut cscas = 0u64;
    for n in 1..=4 {
        let u = universe(n);
        let fns = functions(n, 3);
        let mut sets: Vec<Vec<Vec<usize>>> = functions(n, n).into_iter().map(|f| vec![f]).collect();
        for f in &fns {
            for g in &fns {
                sets.push(vec![f.clone(), g.clone()]);
            }
        }
        let blob = SetKet::standard(&u, u.full_mask()).unwrap();
        for set in sets {
            // Oracle: complete iff the value tuples are pairwise distinct.
            let tuples: Vec<Vec<usize>> =
                (0..n).map(|i| set.iter().map(|f| f[i]).collect()).collect();
            let distinct: BTreeSet<&Vec<usize>> = tuples.iter().collect();
            let complete = distinct.len() == n;
            let attrs: Vec<Attribute> = set
                .iter()
                .enumerate()
                .map(|(k, f)| attribute(&u, &format!("f{k}"), f))
                .collect();
            let fs = AttributeSet::new(attrs).map_err(|e| e.to_string())?;
            ensure(is_csca(&fs).map_err(|e| e.to_string())? == complete, || {
                format!("n={n} {set:?}")
            })?;
            if !complete {
                continue;
            }
            cscas += 1;
            for seed in 0..3 {
                let rec = csca_measure(&fs, &blob, seed).map_err(|e| e.to_string())?;
                let last = rec.final_state().unwrap().coords();
                ensure(last.count_ones() == 1, || {
                    format!("n={n} {set:?}: final {last:#b}")
                })?;
                let element = last.trailing_zeros() as usize;
                let tuple: Vec<Value> = tuples[element]
                    .iter()
                    .map(|&v| Value::int(v as i64))
                    .collect();
                ensure(rec.tuple() == tuple, || {
                    format!("n={n} {set:?}: tuple mismatch")
                })?;
                let owners = tuples.iter().filter(|t| **t == tuples[element]).count();
                ensure(owners == 1, || format!("n={n} {set:?}: tuple not unique"))?;
            }
            let leaves = cascade_distribution(&fs, &blob).map_err(|e| e.to_string())?;
            ensure(leaves.len() == n, || {
                format!("n={n} {set:?}: {} leaves", leaves.len())
            })?;
            let mut seen = 0u64;
            for leaf in &leaves {
                let m = leaf.state.coords();
                ensure(m.count_ones() == 1 && seen & m == 0, || {
                    format!("n={n} {set:?}: leaf {m:#b}")
                })?;
                seen |= m;
                ensure(leaf.probability == Ratio::new(1, n as u64), || {
                    format!("n={n} {set:?}: probability {}", leaf.probability)
                })?;
            }
        }
    }
    Ok(format!("{cscas} complete sets, all uniform 1/|U|"))
}

// 12 --------------------------------------------------------------------

fn bell_counts() -> Check {
    // Oracle: count set partitions by the recurrence on the last element.
    fn stirling_sum(n: usize) -> usize {
        let mut row = vec![1usize];
        for _ in 0..n {
            let mut next = vec![0; row.len() + 1];
            for (k, &s) in row.iter().enumerate() {
                next[k] += s * k;
                next[k + 1] += s;
            }
            row = next;
        }
        row.iter().sum()
    }
    let mut counts = Vec::new();
    for n in 1..=5 {
        let got = enumerate_partitions(&universe(n), 6)
            .map_err(|e| e.to_string())?
            .len();
        ensure(got == stirling_sum(n), || format!("n={n}: {got}"))?;
        counts.push(got);
    }
    ensure(counts == [1, 2, 5, 15, 52], || format!("{counts:?}"))?;
    Ok(format!("{counts:?}"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("ket-table reproduction", ket_table_reproduction),
        ("norm example", norm_example),
        ("quotient counting", quotient_counting),
        ("Born normalization", born_normalization),
        ("Pythagoras", pythagoras),
        ("repeat-measurement certainty", repeat_certainty),
        ("dit-set join law", dit_join_law),
        ("Type 2 characterization", type2_characterization),
        ("orbit oracle", orbit_oracle),
        ("Monte Carlo consistency", monte_carlo),
        ("CSCA non-degeneracy", csca_nondegeneracy),
        ("Bell counts", bell_counts),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
