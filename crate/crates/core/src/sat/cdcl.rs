//! Conflict-driven clause learning with two-watched-variable XOR propagation.

use std::time::Instant;

use super::{Budget, Formula, Lit, SatResult, SolverStats};

const FALSE: u8 = 0;
const TRUE: u8 = 1;
const UNDEF: u8 = 2;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Reason {
    Decision,
    Clause(u32),
    Xor(u32),
}

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    lbd: u32,
    activity: f32,
    deleted: bool,
}

#[derive(Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

struct Xor {
    /// `vars[0]` and `vars[1]` are watched.
    vars: Vec<u32>,
    rhs: bool,
}

/// Max-heap of variables ordered by activity.
struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<usize>,
}

const NOT_IN_HEAP: usize = usize::MAX;

impl VarHeap {
    fn new(n: usize) -> Self {
        VarHeap {
            heap: Vec::with_capacity(n),
            pos: vec![NOT_IN_HEAP; n],
        }
    }

    fn contains(&self, v: u32) -> bool {
        self.pos[v as usize] != NOT_IN_HEAP
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v as usize] = self.heap.len();
        self.heap.push(v);
        self.up(self.heap.len() - 1, act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("nonempty");
        self.pos[top as usize] = NOT_IN_HEAP;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.down(0, act);
        }
        Some(top)
    }

    fn bumped(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            self.up(self.pos[v as usize], act);
        }
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let p = self.heap[parent];
            if act[p as usize] >= act[v as usize] {
                break;
            }
            self.heap[i] = p;
            self.pos[p as usize] = i;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i;
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let left = 2 * i + 1;
            if left >= n {
                break;
            }
            let right = left + 1;
            let child = if right < n && act[self.heap[right] as usize] > act[self.heap[left] as usize] {
                right
            } else {
                left
            };
            let c = self.heap[child];
            if act[c as usize] <= act[v as usize] {
                break;
            }
            self.heap[i] = c;
            self.pos[c as usize] = i;
            i = child;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i;
    }
}

struct Solver {
    value: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<Reason>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    clauses: Vec<Clause>,
    learnts: Vec<u32>,
    watches: Vec<Vec<Watcher>>,
    xors: Vec<Xor>,
    xor_watches: Vec<Vec<u32>>,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f32,
    heap: VarHeap,
    polarity: Vec<bool>,
    seen: Vec<bool>,
    level_stamp: Vec<u64>,
    stamp: u64,
    scratch: Vec<Lit>,
    stats: SolverStats,
}

/// Decides `formula` within `budget`. A returned model always satisfies the formula.
pub fn solve(formula: &Formula, budget: &Budget) -> (SatResult, SolverStats) {
    let mut solver = Solver::new(formula.num_vars() as usize);
    let result = if solver.load(formula) {
        solver.run(budget)
    } else {
        SatResult::Unsat
    };
    if let SatResult::Sat(model) = &result {
        assert!(formula.eval(model), "CDCL produced a model that violates the formula");
    }
    (result, solver.stats)
}

fn luby(mut i: u64) -> u64 {
    // Luby sequence 1,1,2,1,1,2,4,... (0-based index)
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) / 2;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

impl Solver {
    fn new(n: usize) -> Self {
        let mut heap = VarHeap::new(n);
        let activity = vec![0.0; n];
        for v in 0..n as u32 {
            heap.insert(v, &activity);
        }
        Solver {
            value: vec![UNDEF; n],
            level: vec![0; n],
            reason: vec![Reason::Decision; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            clauses: Vec::new(),
            learnts: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            xors: Vec::new(),
            xor_watches: vec![Vec::new(); n],
            activity,
            var_inc: 1.0,
            cla_inc: 1.0,
            heap,
            polarity: vec![false; n],
            seen: vec![false; n],
            level_stamp: vec![0; n + 1],
            stamp: 0,
            scratch: Vec::new(),
            stats: SolverStats::default(),
        }
    }

    fn lit_value(&self, l: Lit) -> u8 {
        let v = self.value[l.var() as usize];
        if v == UNDEF {
            UNDEF
        } else {
            v ^ (l.index() as u8 & 1)
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: Reason) {
        let v = l.var() as usize;
        self.value[v] = u8::from(l.is_positive());
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Returns false if the formula is unsatisfiable at level 0.
    fn load(&mut self, formula: &Formula) -> bool {
        let mut units = Vec::new();
        for clause in formula.clauses() {
            let mut lits = clause.clone();
            lits.sort_unstable();
            lits.dedup();
            if lits.windows(2).any(|w| w[0] == !w[1]) {
                continue;
            }
            match lits.len() {
                0 => return false,
                1 => units.push(lits[0]),
                _ => {
                    self.attach_clause(lits, false, 0);
                }
            }
        }
        for x in formula.xors() {
            match x.vars.len() {
                0 if x.rhs => return false,
                0 => {}
                1 => units.push(Lit::new(x.vars[0], x.rhs)),
                _ => {
                    let xi = self.xors.len() as u32;
                    self.xor_watches[x.vars[0] as usize].push(xi);
                    self.xor_watches[x.vars[1] as usize].push(xi);
                    self.xors.push(Xor {
                        vars: x.vars.clone(),
                        rhs: x.rhs,
                    });
                }
            }
        }
        for l in units {
            match self.lit_value(l) {
                FALSE => return false,
                TRUE => {}
                _ => self.enqueue(l, Reason::Decision),
            }
        }
        self.propagate().is_none()
    }

    fn attach_clause(&mut self, lits: Vec<Lit>, learnt: bool, lbd: u32) -> u32 {
        let cref = self.clauses.len() as u32;
        self.watches[lits[0].index()].push(Watcher {
            cref,
            blocker: lits[1],
        });
        self.watches[lits[1].index()].push(Watcher {
            cref,
            blocker: lits[0],
        });
        self.clauses.push(Clause {
            lits,
            learnt,
            lbd,
            activity: 0.0,
            deleted: false,
        });
        if learnt {
            self.learnts.push(cref);
            self.stats.learnt_clauses += 1;
        }
        cref
    }

    fn propagate(&mut self) -> Option<Reason> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            if let Some(conflict) = self.propagate_clauses(p) {
                return Some(conflict);
            }
            if let Some(conflict) = self.propagate_xors(p.var()) {
                return Some(conflict);
            }
        }
        None
    }

    fn propagate_clauses(&mut self, p: Lit) -> Option<Reason> {
        let false_lit = !p;
        let mut ws = std::mem::take(&mut self.watches[false_lit.index()]);
        let (mut i, mut j) = (0, 0);
        let mut conflict = None;
        while i < ws.len() {
            let w = ws[i];
            i += 1;
            if self.lit_value(w.blocker) == TRUE {
                ws[j] = w;
                j += 1;
                continue;
            }
            let cref = w.cref as usize;
            if self.clauses[cref].deleted {
                continue;
            }
            if self.clauses[cref].lits[0] == false_lit {
                self.clauses[cref].lits.swap(0, 1);
            }
            let first = self.clauses[cref].lits[0];
            let kept = Watcher {
                cref: w.cref,
                blocker: first,
            };
            if first != w.blocker && self.lit_value(first) == TRUE {
                ws[j] = kept;
                j += 1;
                continue;
            }
            let len = self.clauses[cref].lits.len();
            let mut moved = false;
            for k in 2..len {
                let l = self.clauses[cref].lits[k];
                if self.lit_value(l) != FALSE {
                    self.clauses[cref].lits.swap(1, k);
                    self.watches[l.index()].push(kept);
                    moved = true;
                    break;
                }
            }
            if moved {
                continue;
            }
            ws[j] = kept;
            j += 1;
            if self.lit_value(first) == FALSE {
                conflict = Some(Reason::Clause(w.cref));
                while i < ws.len() {
                    ws[j] = ws[i];
                    j += 1;
                    i += 1;
                }
            } else {
                self.enqueue(first, Reason::Clause(w.cref));
            }
        }
        ws.truncate(j);
        self.watches[false_lit.index()] = ws;
        conflict
    }

    fn propagate_xors(&mut self, v: u32) -> Option<Reason> {
        let mut wl = std::mem::take(&mut self.xor_watches[v as usize]);
        let (mut i, mut j) = (0, 0);
        let mut conflict = None;
        while i < wl.len() {
            let xi = wl[i];
            i += 1;
            let x = &mut self.xors[xi as usize];
            if x.vars[0] != v {
                x.vars.swap(0, 1);
            }
            let replacement = (2..x.vars.len()).find(|&k| self.value[x.vars[k] as usize] == UNDEF);
            if let Some(k) = replacement {
                x.vars.swap(0, k);
                let nv = x.vars[0];
                self.xor_watches[nv as usize].push(xi);
                continue;
            }
            wl[j] = xi;
            j += 1;
            let other = x.vars[1];
            let mut parity = x.rhs;
            for (pos, &u) in x.vars.iter().enumerate() {
                if pos != 1 {
                    parity ^= self.value[u as usize] == TRUE;
                }
            }
            // `parity` is now the value `other` must take.
            match self.value[other as usize] {
                UNDEF => self.enqueue(Lit::new(other, parity), Reason::Xor(xi)),
                val if (val == TRUE) == parity => {}
                _ => {
                    conflict = Some(Reason::Xor(xi));
                    while i < wl.len() {
                        wl[j] = wl[i];
                        j += 1;
                        i += 1;
                    }
                }
            }
        }
        wl.truncate(j);
        self.xor_watches[v as usize] = wl;
        conflict
    }

    /// Loads into `scratch` the clause explaining `reason`; for an XOR this is
    /// the implied literal plus the falsified literals of the other variables.
    fn explain(&mut self, reason: Reason, implied: Option<u32>) {
        self.scratch.clear();
        match reason {
            Reason::Clause(c) => self.scratch.extend_from_slice(&self.clauses[c as usize].lits),
            Reason::Xor(x) => {
                for &u in &self.xors[x as usize].vars {
                    let val = self.value[u as usize] == TRUE;
                    self.scratch.push(if Some(u) == implied {
                        Lit::new(u, val)
                    } else {
                        Lit::new(u, !val)
                    });
                }
            }
            Reason::Decision => {}
        }
    }

    fn bump_var(&mut self, v: u32) {
        self.activity[v as usize] += self.var_inc;
        if self.activity[v as usize] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v, &self.activity);
    }

    fn bump_clause(&mut self, c: u32) {
        let cl = &mut self.clauses[c as usize];
        cl.activity += self.cla_inc;
        if cl.activity > 1e20 {
            for &l in &self.learnts {
                self.clauses[l as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn analyze(&mut self, conflict: Reason) -> (Vec<Lit>, u32) {
        let current = self.decision_level();
        let mut learnt = vec![Lit::pos(0)];
        let mut path = 0usize;
        let mut implied: Option<Lit> = None;
        let mut idx = self.trail.len();
        let mut reason = conflict;
        loop {
            if let Reason::Clause(c) = reason {
                if self.clauses[c as usize].learnt {
                    self.bump_clause(c);
                }
            }
            self.explain(reason, implied.map(Lit::var));
            let lits = std::mem::take(&mut self.scratch);
            for &q in &lits {
                let v = q.var();
                if Some(v) == implied.map(Lit::var) || self.seen[v as usize] || self.level[v as usize] == 0 {
                    continue;
                }
                self.seen[v as usize] = true;
                self.bump_var(v);
                if self.level[v as usize] >= current {
                    path += 1;
                } else {
                    learnt.push(q);
                }
            }
            self.scratch = lits;
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var() as usize] {
                    break;
                }
            }
            let p = self.trail[idx];
            self.seen[p.var() as usize] = false;
            path -= 1;
            if path == 0 {
                learnt[0] = !p;
                break;
            }
            implied = Some(p);
            reason = self.reason[p.var() as usize];
        }

        // Local minimization: drop literals implied by others already in the clause.
        let original = learnt.clone();
        let mut keep = vec![learnt[0]];
        for &l in &learnt[1..] {
            let r = self.reason[l.var() as usize];
            if r == Reason::Decision {
                keep.push(l);
                continue;
            }
            self.explain(r, Some(l.var()));
            let redundant = self
                .scratch
                .iter()
                .all(|q| q.var() == l.var() || self.seen[q.var() as usize] || self.level[q.var() as usize] == 0);
            if !redundant {
                keep.push(l);
            }
        }
        for l in &original {
            self.seen[l.var() as usize] = false;
        }
        learnt = keep;

        let mut bt = 0;
        if learnt.len() > 1 {
            let mut best = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var() as usize] > self.level[learnt[best].var() as usize] {
                    best = i;
                }
            }
            learnt.swap(1, best);
            bt = self.level[learnt[1].var() as usize];
        }
        (learnt, bt)
    }

    fn lbd(&mut self, lits: &[Lit]) -> u32 {
        self.stamp += 1;
        let mut count = 0;
        for l in lits {
            let lv = self.level[l.var() as usize] as usize;
            if self.level_stamp[lv] != self.stamp {
                self.level_stamp[lv] = self.stamp;
                count += 1;
            }
        }
        count
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let start = self.trail_lim[level as usize];
        for i in (start..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var();
            self.value[v as usize] = UNDEF;
            self.reason[v as usize] = Reason::Decision;
            self.polarity[v as usize] = l.is_positive();
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level as usize);
        self.qhead = start;
    }

    fn locked(&self, c: u32) -> bool {
        let l = self.clauses[c as usize].lits[0];
        self.value[l.var() as usize] != UNDEF && self.reason[l.var() as usize] == Reason::Clause(c)
    }

    fn reduce_db(&mut self) {
        let mut learnts = std::mem::take(&mut self.learnts);
        learnts.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a as usize], &self.clauses[b as usize]);
            ca.lbd.cmp(&cb.lbd).then(cb.activity.total_cmp(&ca.activity))
        });
        let half = learnts.len() / 2;
        let mut kept = Vec::with_capacity(learnts.len());
        for (i, &c) in learnts.iter().enumerate() {
            if i < half || self.clauses[c as usize].lbd <= 2 || self.locked(c) {
                kept.push(c);
            } else {
                let cl = &mut self.clauses[c as usize];
                cl.deleted = true;
                cl.lits = Vec::new();
            }
        }
        self.learnts = kept;
        let clauses = &self.clauses;
        for ws in &mut self.watches {
            ws.retain(|w| !clauses[w.cref as usize].deleted);
        }
    }

    fn run(&mut self, budget: &Budget) -> SatResult {
        let start = Instant::now();
        let mut restarts = 0u64;
        let mut restart_limit = 100 * luby(0);
        let mut since_restart = 0u64;
        let mut next_reduce = 2000u64;
        let mut reductions = 0u64;
        let mut ticks = 0u64;
        loop {
            ticks += 1;
            if ticks % 1024 == 0 {
                if let Some(limit) = budget.time {
                    if start.elapsed() >= limit {
                        return SatResult::Unknown;
                    }
                }
            }
            if let Some(conflict) = self.propagate() {
                self.stats.conflicts += 1;
                since_restart += 1;
                if self.decision_level() == 0 {
                    return SatResult::Unsat;
                }
                let (learnt, bt) = self.analyze(conflict);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], Reason::Decision);
                } else {
                    let lbd = self.lbd(&learnt);
                    let asserting = learnt[0];
                    let cref = self.attach_clause(learnt, true, lbd);
                    self.bump_clause(cref);
                    self.enqueue(asserting, Reason::Clause(cref));
                }
                self.var_inc /= 0.95;
                self.cla_inc /= 0.999;
                continue;
            }
            if since_restart >= restart_limit {
                restarts += 1;
                self.stats.restarts = restarts;
                since_restart = 0;
                restart_limit = 100 * luby(restarts);
                self.cancel_until(0);
                continue;
            }
            if self.stats.conflicts >= next_reduce {
                reductions += 1;
                next_reduce = self.stats.conflicts + 2000 + 300 * reductions;
                self.reduce_db();
            }
            let next = loop {
                match self.heap.pop(&self.activity) {
                    None => break None,
                    Some(v) if self.value[v as usize] == UNDEF => break Some(v),
                    Some(_) => {}
                }
            };
            let Some(v) = next else {
                return SatResult::Sat(self.value.iter().map(|&x| x == TRUE).collect());
            };
            self.stats.decisions += 1;
            if budget.branches.is_some_and(|b| self.stats.decisions > b) {
                return SatResult::Unknown;
            }
            self.trail_lim.push(self.trail.len());
            self.enqueue(Lit::new(v, self.polarity[v as usize]), Reason::Decision);
        }
    }
}
