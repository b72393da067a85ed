//! Words in group generators, Tietze elimination down to one relator,
//! normalisation of that relator to `[a1,b1]…[ag,bg] x1…xr`, and
//! Reidemeister–Schreier for index-2 kernels.
//!
//! Generator values are carried along every substitution so that the final
//! canonical generators come out as actual group elements.

use std::collections::BTreeMap;

use thiserror::Error;

/// A generator index with exponent ±1.
pub type Letter = (usize, i32);
pub type Word = Vec<Letter>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("no generator can be eliminated from {0} relators")]
    Stuck(usize),
    #[error("relator is not a surface word: {0}")]
    NotSurfaceWord(String),
    #[error("generator {0} occurs in no relator")]
    FreeGenerator(usize),
    #[error("pair letter {0} is not linked with any other")]
    Unlinked(usize),
    #[error("no relator left")]
    Empty,
}

pub trait GroupOps {
    type E: Clone;
    fn one(&self) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
}

pub fn inverse(w: &[Letter]) -> Word {
    w.iter().rev().map(|&(g, e)| (g, -e)).collect()
}

pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        match out.last() {
            Some(&(g, e)) if g == l.0 && e == -l.1 => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

pub fn cyclic_reduce(w: &[Letter]) -> Word {
    let mut w = free_reduce(w);
    while w.len() >= 2 {
        let (f, l) = (w[0], w[w.len() - 1]);
        if f.0 == l.0 && f.1 == -l.1 {
            w.pop();
            w.remove(0);
        } else {
            break;
        }
    }
    w
}

pub fn power(w: &[Letter], m: u32) -> Word {
    let mut out = Vec::with_capacity(w.len() * m as usize);
    for _ in 0..m {
        out.extend_from_slice(w);
    }
    out
}

pub fn eval<G: GroupOps>(g: &G, values: &[G::E], w: &[Letter]) -> G::E {
    w.iter().fold(g.one(), |acc, &(k, e)| {
        if e > 0 {
            g.mul(&acc, &values[k])
        } else {
            g.mul(&acc, &g.inv(&values[k]))
        }
    })
}

pub fn format_word(w: &[Letter], names: &[String]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&(g, e)| if e > 0 { names[g].clone() } else { format!("{}^-1", names[g]) })
        .collect::<Vec<_>>()
        .join(" ")
}

/// A finite presentation with generator values; relator `(w, m)` reads `w^m = 1`.
#[derive(Clone, Debug)]
pub struct Presentation<E> {
    pub gens: Vec<E>,
    pub names: Vec<String>,
    pub relators: Vec<(Word, u32)>,
}

/// Generators in canonical form with `Π[a_i,b_i] Π x_j = 1` and `x_j^{m_j} = 1`.
#[derive(Clone, Debug)]
pub struct Canonical<E> {
    pub handles: Vec<(E, E)>,
    pub cones: Vec<(E, u32)>,
}

impl<E: Clone> Canonical<E> {
    pub fn genus(&self) -> usize {
        self.handles.len()
    }

    pub fn periods(&self) -> Vec<u32> {
        let mut p: Vec<u32> = self.cones.iter().map(|c| c.1).collect();
        p.sort_unstable();
        p
    }

    /// Generators in the order `a1 b1 … ag bg x1 … xr`.
    pub fn generators(&self) -> Vec<E> {
        let mut v = Vec::new();
        for (a, b) in &self.handles {
            v.push(a.clone());
            v.push(b.clone());
        }
        v.extend(self.cones.iter().map(|c| c.0.clone()));
        v
    }

    pub fn names(&self) -> Vec<String> {
        let mut v = Vec::new();
        for i in 1..=self.handles.len() {
            v.push(format!("A{i}"));
            v.push(format!("B{i}"));
        }
        for i in 1..=self.cones.len() {
            v.push(format!("X{i}"));
        }
        v
    }

    /// The long relator `[A1,B1]…[Ag,Bg] X1…Xr` over `generators()`.
    pub fn long_relator(&self) -> Word {
        let mut w = Vec::new();
        for i in 0..self.handles.len() {
            let (a, b) = (2 * i, 2 * i + 1);
            w.extend_from_slice(&[(a, 1), (b, 1), (a, -1), (b, -1)]);
        }
        let off = 2 * self.handles.len();
        w.extend((0..self.cones.len()).map(|j| (off + j, 1)));
        w
    }

    pub fn presentation(&self) -> Presentation<E> {
        let off = 2 * self.handles.len();
        let mut relators = vec![(self.long_relator(), 1)];
        relators.extend(self.cones.iter().enumerate().map(|(j, c)| (vec![(off + j, 1)], c.1)));
        Presentation { gens: self.generators(), names: self.names(), relators }
    }
}

fn substitute(w: &[Letter], g: usize, repl: &[Letter]) -> Word {
    let inv = inverse(repl);
    let mut out = Vec::with_capacity(w.len());
    for &(k, e) in w {
        if k == g {
            out.extend_from_slice(if e > 0 { repl } else { &inv });
        } else {
            out.push((k, e));
        }
    }
    out
}

fn occurrences(w: &[Letter], g: usize) -> usize {
    w.iter().filter(|l| l.0 == g).count()
}

/// Tietze-reduce a presentation to a single relator and normalise it.
pub fn canonicalize<G: GroupOps>(grp: &G, pres: &Presentation<G::E>) -> Result<Canonical<G::E>, WordError> {
    let mut vals = pres.gens.clone();
    let mut cone: BTreeMap<usize, u32> = BTreeMap::new();
    let mut rels: Vec<Word> = Vec::new();
    for (w, m) in &pres.relators {
        if *m > 1 {
            let x = vals.len();
            vals.push(eval(grp, &vals, w));
            cone.insert(x, *m);
            let mut r = w.clone();
            r.push((x, -1));
            rels.push(r);
        } else {
            rels.push(w.clone());
        }
    }

    loop {
        rels = rels.iter().map(|r| cyclic_reduce(r)).filter(|r| !r.is_empty()).collect();
        if rels.len() <= 1 {
            break;
        }
        // (merges cleanly, relator length, relator, generator)
        let mut best: Option<(bool, usize, usize, usize)> = None;
        for (ri, r) in rels.iter().enumerate() {
            for &(g, _) in r {
                if cone.contains_key(&g) || occurrences(r, g) != 1 {
                    continue;
                }
                let elsewhere: usize =
                    rels.iter().enumerate().filter(|(k, _)| *k != ri).map(|(_, s)| occurrences(s, g)).sum();
                let key = (elsewhere != 1, r.len(), ri, g);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
        }
        let (_, _, ri, g) = best.ok_or(WordError::Stuck(rels.len()))?;
        let r = rels.remove(ri);
        let p = r.iter().position(|l| l.0 == g).unwrap();
        let e = r[p].1;
        let rest: Word = r[p + 1..].iter().chain(r[..p].iter()).copied().collect();
        // g^e · rest = 1
        let repl = if e > 0 { inverse(&rest) } else { rest };
        rels = rels.iter().map(|s| substitute(s, g, &repl)).collect();
    }
    let w = rels.into_iter().next().ok_or(WordError::Empty)?;
    normalize_surface_word(grp, vals, &cone, w)
}

fn normalize_surface_word<G: GroupOps>(
    grp: &G,
    mut vals: Vec<G::E>,
    cone: &BTreeMap<usize, u32>,
    mut tail: Word,
) -> Result<Canonical<G::E>, WordError> {
    // every non-cone letter twice with opposite signs, cones once
    let mut count: BTreeMap<usize, (usize, i32)> = BTreeMap::new();
    for &(g, e) in &tail {
        let c = count.entry(g).or_insert((0, 0));
        c.0 += 1;
        c.1 += e;
    }
    for (&g, &(n, s)) in &count {
        let ok = if cone.contains_key(&g) { n == 1 } else { n == 2 && s == 0 };
        if !ok {
            return Err(WordError::NotSurfaceWord(format!("letter {g} occurs {n} times")));
        }
    }
    for &x in cone.keys() {
        if !count.contains_key(&x) {
            return Err(WordError::NotSurfaceWord(format!("cone letter {x} vanished")));
        }
    }

    let mut handles: Vec<(usize, usize)> = Vec::new();
    let mut used: Vec<usize> = Vec::new();
    loop {
        let pairs: Vec<usize> = count.keys().copied().filter(|g| !cone.contains_key(g) && tail.iter().any(|l| l.0 == *g)).collect();
        if pairs.is_empty() {
            break;
        }
        let mut link = None;
        'outer: for &a in &pairs {
            let pos: Vec<usize> = tail.iter().enumerate().filter(|(_, l)| l.0 == a).map(|(i, _)| i).collect();
            let (p, q) = (pos[0], pos[1]);
            for &(b, _) in &tail[p + 1..q] {
                if b != a && !cone.contains_key(&b) && occurrences(&tail[p + 1..q], b) == 1 {
                    link = Some((a, b, p));
                    break 'outer;
                }
            }
        }
        let (a, b, p) = link.ok_or(WordError::Unlinked(pairs[0]))?;

        // rotate so that `a` leads; conjugates the prefix by the moved part
        let moved: Word = tail[..p].to_vec();
        if !moved.is_empty() {
            let t = eval(grp, &vals, &moved);
            let ti = grp.inv(&t);
            for &(h1, h2) in &handles {
                vals[h1] = grp.mul(&grp.mul(&ti, &vals[h1]), &t);
                vals[h2] = grp.mul(&grp.mul(&ti, &vals[h2]), &t);
            }
            tail.rotate_left(p);
        }
        // make the first occurrences of a and b positive
        for g in [a, b] {
            let first = tail.iter().find(|l| l.0 == g).unwrap().1;
            if first < 0 {
                vals[g] = grp.inv(&vals[g]);
                for l in tail.iter_mut().filter(|l| l.0 == g) {
                    l.1 = -l.1;
                }
            }
        }
        // tail = a P b Q a⁻¹ R b⁻¹ S
        let ia2 = tail.iter().rposition(|l| l.0 == a).unwrap();
        let ib1 = tail.iter().position(|l| l.0 == b).unwrap();
        let ib2 = tail.iter().rposition(|l| l.0 == b).unwrap();
        debug_assert!(0 < ib1 && ib1 < ia2 && ia2 < ib2);
        let pw = &tail[1..ib1];
        let qw = &tail[ib1 + 1..ia2];
        let rw = &tail[ia2 + 1..ib2];
        let sw = &tail[ib2 + 1..];
        let vp = eval(grp, &vals, pw);
        let vq = eval(grp, &vals, qw);
        let vr = eval(grp, &vals, rw);
        let t = grp.mul(&grp.mul(&vr, &vq), &vp);
        let ti = grp.inv(&t);
        // new handle: a' = (RQP)⁻¹ a P, b' = b Q P
        let a_new = grp.mul(&grp.mul(&ti, &vals[a]), &vp);
        let b_new = grp.mul(&grp.mul(&vals[b], &vq), &vp);
        for &(h1, h2) in &handles {
            vals[h1] = grp.mul(&grp.mul(&ti, &vals[h1]), &t);
            vals[h2] = grp.mul(&grp.mul(&ti, &vals[h2]), &t);
        }
        let (na, nb) = (vals.len(), vals.len() + 1);
        vals.push(a_new);
        vals.push(b_new);
        handles.push((na, nb));
        let mut next: Word = sw.to_vec();
        next.extend_from_slice(rw);
        next.extend_from_slice(qw);
        next.extend_from_slice(pw);
        tail = cyclic_reduce(&next);
        if let Some(&g) = count.keys().find(|g| !handles.iter().any(|h| [h.0, h.1].contains(g)) && ![a, b].contains(g) && !tail.iter().any(|l| l.0 == **g) && !used.contains(g)) {
            return Err(WordError::FreeGenerator(g));
        }
        used.push(a);
        used.push(b);
    }

    let cones = tail
        .iter()
        .map(|&(x, e)| {
            let v = if e > 0 { vals[x].clone() } else { grp.inv(&vals[x]) };
            (v, cone[&x])
        })
        .collect();
    Ok(Canonical { handles: handles.iter().map(|&(a, b)| (vals[a].clone(), vals[b].clone())).collect(), cones })
}

/// Homomorphisms onto `Z/2`, as generator images, satisfying every relator.
pub fn homs_to_z2<E>(pres: &Presentation<E>) -> Vec<Vec<u8>> {
    let n = pres.gens.len();
    assert!(n < 24, "too many generators for exhaustive Z/2 homomorphisms");
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let img: Vec<u8> = (0..n).map(|k| ((mask >> k) & 1) as u8).collect();
        if pres.relators.iter().all(|(w, m)| (image(&img, w) * m) % 2 == 0) {
            out.push(img);
        }
    }
    out
}

pub fn image(img: &[u8], w: &[Letter]) -> u32 {
    w.iter().map(|l| img[l.0] as u32).sum::<u32>() % 2
}

/// Kernel is torsion free: every cone relator has order 2 and odd image.
pub fn kernel_torsion_free<E>(pres: &Presentation<E>, img: &[u8]) -> bool {
    pres.relators.iter().filter(|(_, m)| *m > 1).all(|(w, m)| *m == 2 && image(img, w) == 1)
}

/// Presentation of `ker(φ)` with transversal `{1, t}`, `t` the first
/// generator with nontrivial image.
pub fn reidemeister_schreier<G: GroupOps>(grp: &G, pres: &Presentation<G::E>, img: &[u8]) -> Presentation<G::E> {
    let t = img.iter().position(|&x| x == 1).expect("surjective");
    let n = pres.gens.len();
    let rep = |c: u8| if c == 0 { grp.one() } else { pres.gens[t].clone() };
    let mut gens = Vec::with_capacity(2 * n);
    let mut names = Vec::with_capacity(2 * n);
    for s in 0..n {
        for c in 0..2u8 {
            let c2 = c ^ img[s];
            let v = grp.mul(&grp.mul(&rep(c), &pres.gens[s]), &grp.inv(&rep(c2)));
            gens.push(v);
            names.push(format!("{}_{}", pres.names[s], c));
        }
    }
    let sg = |s: usize, c: u8| 2 * s + c as usize;
    let mut relators = vec![(vec![(sg(t, 0), 1)], 1)];
    for (w, m) in &pres.relators {
        let full = power(w, *m);
        for start in 0..2u8 {
            let mut c = start;
            let mut lifted = Vec::with_capacity(full.len());
            for &(s, e) in &full {
                if e > 0 {
                    lifted.push((sg(s, c), 1));
                    c ^= img[s];
                } else {
                    c ^= img[s];
                    lifted.push((sg(s, c), -1));
                }
            }
            debug_assert_eq!(c, start);
            relators.push((lifted, 1));
        }
    }
    Presentation { gens, names, relators }
}
