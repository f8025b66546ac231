// Stress the restriction primitive against brute-force enumeration on random
// tree shapes and random restriction sequences.
use syncplan::pctree::*;

fn random_shape(rng: &mut impl rand::Rng, labels: &mut Vec<Label>, depth: usize) -> Shape {
    if depth == 0 || labels.len() == 1 || rng.gen_bool(0.4) {
        return Shape::Leaf(labels.pop().unwrap());
    }
    let n = labels.len();
    let take = rng.gen_range(2..=n.min(4));
    let mut kids = Vec::new();
    let mut budget = labels.split_off(labels.len() - take);
    while !budget.is_empty() {
        kids.push(random_shape(rng, &mut budget, depth - 1));
    }
    if kids.len() == 1 {
        return kids.pop().unwrap();
    }
    if rng.gen_bool(0.5) {
        Shape::C(kids)
    } else {
        Shape::P(kids)
    }
}

fn main() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20260809);
    let mut checked = 0u64;
    for case in 0..4000 {
        let n = rng.gen_range(4..=8usize);
        let mut pool: Vec<Label> = (0..n as u32).collect();
        let shape = {
            let mut kids = Vec::new();
            while !pool.is_empty() {
                kids.push(random_shape(&mut rng, &mut pool, 3));
            }
            if kids.len() == 1 { kids.pop().unwrap() } else if rng.gen_bool(0.5) { Shape::C(kids) } else { Shape::P(kids) }
        };
        let mut t = PcTree::from_shape(&shape);
        if t.n_leaves() < 4 { continue; }
        let labels = t.leaves();
        let n = labels.len();
        for _step in 0..5 {
            let size = rng.gen_range(2..=(n - 2));
            let mut s = labels.clone();
            for i in 0..size {
                let j = rng.gen_range(i..n);
                s.swap(i, j);
            }
            let s = s[0..size].to_vec();
            let before = t.clone();
            let ok = t.restrict(&s).unwrap();
            let want: std::collections::BTreeSet<_> = before
                .admissible_orders()
                .into_iter()
                .filter(|o| {
                    let set: std::collections::HashSet<_> = s.iter().collect();
                    let flags: Vec<bool> = o.iter().map(|l| set.contains(l)).collect();
                    let m = flags.len();
                    let mut starts = 0;
                    for i in 0..m {
                        if flags[i] && !flags[(i + m - 1) % m] {
                            starts += 1;
                        }
                    }
                    starts == 1
                })
                .collect();
            checked += 1;
            if ok != !want.is_empty() {
                println!("FEASIBILITY case={case} before={before} s={s:?} got={ok}");
                return;
            }
            if !ok {
                break;
            }
            let got = t.admissible_orders();
            if got != want {
                println!("SETS case={case} before={before} s={s:?} after={t}");
                println!("got {got:?}\nwant {want:?}");
                return;
            }
            if t.count_admissible() as usize != got.len() {
                println!("COUNT case={case} after={t} count={} brute={}", t.count_admissible(), got.len());
                return;
            }
        }
    }
    println!("ok: {checked} restrictions verified");
}
