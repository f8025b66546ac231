//! 2-SAT over implication graphs, via Tarjan strongly connected components.

/// Literal: variable index with sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lit {
    pub var: usize,
    pub neg: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit { var, neg: false }
    }
    pub fn neg(var: usize) -> Self {
        Lit { var, neg: true }
    }
    fn index(self) -> usize {
        self.var * 2 + usize::from(self.neg)
    }
    fn complement(self) -> Lit {
        Lit { var: self.var, neg: !self.neg }
    }
}

#[derive(Default)]
pub struct TwoSat {
    n_vars: usize,
    clauses: Vec<(Lit, Lit)>,
}

impl TwoSat {
    pub fn new(n_vars: usize) -> Self {
        TwoSat { n_vars, clauses: Vec::new() }
    }

    pub fn add_var(&mut self) -> usize {
        self.n_vars += 1;
        self.n_vars - 1
    }

    pub fn add_clause(&mut self, a: Lit, b: Lit) {
        debug_assert!(a.var < self.n_vars && b.var < self.n_vars);
        self.clauses.push((a, b));
    }

    /// x == y (xor parity false) or x != y (parity true).
    pub fn add_parity(&mut self, x: usize, y: usize, differ: bool) {
        if differ {
            self.add_clause(Lit::pos(x), Lit::pos(y));
            self.add_clause(Lit::neg(x), Lit::neg(y));
        } else {
            self.add_clause(Lit::pos(x), Lit::neg(y));
            self.add_clause(Lit::neg(x), Lit::pos(y));
        }
    }

    /// Satisfying assignment or None. Deterministic for a fixed clause order.
    pub fn solve(&self) -> Option<Vec<bool>> {
        let n = self.n_vars * 2;
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in &self.clauses {
            adj[a.complement().index()].push(b.index());
            adj[b.complement().index()].push(a.index());
        }
        // Tarjan SCC, iterative
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut scc = vec![usize::MAX; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut timer = 0;
        let mut n_sccs = 0;
        for start in 0..n {
            if index[start] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(start, 0)];
            index[start] = timer;
            low[start] = timer;
            timer += 1;
            stack.push(start);
            on_stack[start] = true;
            while let Some(&mut (v, ref mut i)) = call.last_mut() {
                if *i < adj[v].len() {
                    let w = adj[v][*i];
                    *i += 1;
                    if index[w] == usize::MAX {
                        index[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&mut (p, _)) = call.last_mut() {
                        low[p] = low[p].min(low[v]);
                    }
                    if low[v] == index[v] {
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w] = false;
                            scc[w] = n_sccs;
                            if w == v {
                                break;
                            }
                        }
                        n_sccs += 1;
                    }
                }
            }
        }
        let mut out = vec![false; self.n_vars];
        for v in 0..self.n_vars {
            let sp = scc[Lit::pos(v).index()];
            let sn = scc[Lit::neg(v).index()];
            if sp == sn {
                return None;
            }
            // Tarjan numbers SCCs in reverse topological order: a literal is
            // true when its SCC comes later in topological order, i.e. has
            // the smaller Tarjan index.
            out[v] = sp < sn;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_sat() {
        let mut s = TwoSat::new(2);
        s.add_clause(Lit::pos(0), Lit::pos(1));
        s.add_clause(Lit::neg(0), Lit::pos(1));
        let a = s.solve().unwrap();
        assert!(a[1]);
    }

    #[test]
    fn contradiction() {
        let mut s = TwoSat::new(1);
        s.add_clause(Lit::pos(0), Lit::pos(0));
        s.add_clause(Lit::neg(0), Lit::neg(0));
        assert!(s.solve().is_none());
    }

    #[test]
    fn random_instances_match_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _case in 0..300 {
            let nv = rng.gen_range(1..=12);
            let mut s = TwoSat::new(nv);
            let nc = rng.gen_range(0..=24);
            let mut clauses = Vec::new();
            for _ in 0..nc {
                let a = Lit { var: rng.gen_range(0..nv), neg: rng.gen_bool(0.5) };
                let b = Lit { var: rng.gen_range(0..nv), neg: rng.gen_bool(0.5) };
                s.add_clause(a, b);
                clauses.push((a, b));
            }
            let got = s.solve();
            let mut sat_by_enum = false;
            'outer: for mask in 0u32..(1 << nv) {
                let val = |l: Lit| ((mask >> l.var) & 1 == 1) != l.neg;
                if clauses.iter().all(|&(a, b)| val(a) || val(b)) {
                    sat_by_enum = true;
                    break 'outer;
                }
            }
            assert_eq!(got.is_some(), sat_by_enum);
            if let Some(a) = got {
                let val = |l: Lit| a[l.var] != l.neg;
                assert!(clauses.iter().all(|&(x, y)| val(x) || val(y)));
            }
        }
    }
}
