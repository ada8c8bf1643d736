//! Complete-labelling search over an index graph.
//!
//! Each node carries a domain bitmask over {0, ½, 1}. The labelling
//! constraint `λ(x) = 1 - max λ(attackers)` is propagated in both directions
//! (generalized arc consistency on the max constraint), and the remaining
//! choices are explored depth-first.

use std::ops::ControlFlow;

use crate::tri::Tri;

pub(crate) type Dom = u8;
pub(crate) const FULL: Dom = 0b111;

pub(crate) fn single(t: Tri) -> Dom {
    t.bit()
}

fn size(d: Dom) -> u32 {
    d.count_ones()
}

fn lowest(d: Dom) -> Dom {
    d & d.wrapping_neg()
}

/// Bits `v` such that some bit of `d` is `<= v`.
fn le_mask(d: Dom) -> Dom {
    if d == 0 {
        0
    } else {
        FULL & !(lowest(d) - 1)
    }
}

/// Maps a set of maxima to the set of `1 - max` values.
fn negate(d: Dom) -> Dom {
    ((d & 1) << 2) | (d & 2) | ((d >> 2) & 1)
}

/// Attack graph over `0..n`.
#[derive(Clone, Debug, Default)]
pub(crate) struct Graph {
    pub attackers: Vec<Vec<usize>>,
    pub targets: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
        let mut attackers = vec![Vec::new(); n];
        let mut targets = vec![Vec::new(); n];
        for (a, b) in edges {
            attackers[b].push(a);
            targets[a].push(b);
        }
        for v in attackers.iter_mut().chain(targets.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        Graph { attackers, targets }
    }

    pub fn len(&self) -> usize {
        self.attackers.len()
    }

    pub fn add_node(&mut self) -> usize {
        self.attackers.push(Vec::new());
        self.targets.push(Vec::new());
        self.attackers.len() - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if !self.targets[a].contains(&b) {
            self.targets[a].push(b);
            self.attackers[b].push(a);
        }
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        self.targets[a].retain(|&t| t != b);
        self.attackers[b].retain(|&s| s != a);
    }

    /// Whether `vals` satisfies the labelling constraint at every node.
    pub fn is_legitimate(&self, vals: &[Tri]) -> bool {
        (0..self.len()).all(|x| {
            let m = self.attackers[x].iter().map(|&y| vals[y]).max().unwrap_or(Tri::Zero);
            vals[x] == m.not()
        })
    }

    /// Narrows domains to generalized arc consistency. Returns false on a wipe-out.
    pub fn propagate(&self, dom: &mut [Dom], seeds: impl IntoIterator<Item = usize>) -> bool {
        let n = self.len();
        let mut queued = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        for c in seeds {
            if !queued[c] {
                queued[c] = true;
                queue.push_back(c);
            }
        }
        let mut changed = Vec::new();
        while let Some(c) = queue.pop_front() {
            queued[c] = false;
            changed.clear();
            if !self.revise(c, dom, &mut changed) {
                return false;
            }
            for &y in &changed {
                if !queued[y] {
                    queued[y] = true;
                    queue.push_back(y);
                }
                for &t in &self.targets[y] {
                    if !queued[t] {
                        queued[t] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        true
    }

    /// Fixes node `i` to `d` and propagates through every constraint it takes part in.
    pub fn assign(&self, dom: &mut [Dom], i: usize, d: Dom) -> bool {
        dom[i] = d;
        self.propagate(dom, std::iter::once(i).chain(self.targets[i].iter().copied()))
    }

    /// Revises the constraint of node `x`, pushing every narrowed node to `changed`.
    fn revise(&self, x: usize, dom: &mut [Dom], changed: &mut Vec<usize>) -> bool {
        let att = &self.attackers[x];
        // Feasible maxima over the attackers.
        let maxima = if att.is_empty() {
            single(Tri::Zero)
        } else {
            let mut all_le = FULL;
            let mut any_eq = 0;
            for &y in att {
                all_le &= le_mask(dom[y]);
                any_eq |= dom[y];
            }
            all_le & any_eq
        };
        let nx = dom[x] & negate(maxima);
        if nx == 0 {
            return false;
        }
        if nx != dom[x] {
            dom[x] = nx;
            changed.push(x);
        }
        if att.is_empty() {
            return true;
        }
        let allowed = negate(nx) & maxima;
        let mut cnt_le = [0usize; 3];
        let mut cnt_eq = [0usize; 3];
        for &y in att {
            let le = le_mask(dom[y]);
            for v in 0..3 {
                if le >> v & 1 == 1 {
                    cnt_le[v] += 1;
                }
                if dom[y] >> v & 1 == 1 {
                    cnt_eq[v] += 1;
                }
            }
        }
        let deg = att.len();
        for &y in att {
            let dy = dom[y];
            let le_y = le_mask(dy);
            let mut keep = 0;
            for w in 0..3u8 {
                if dy >> w & 1 == 0 {
                    continue;
                }
                let supported = (w..3).any(|v| {
                    let vi = v as usize;
                    if allowed >> v & 1 == 0 {
                        return false;
                    }
                    let others_le = cnt_le[vi] - usize::from(le_y >> v & 1 == 1);
                    if others_le < deg - 1 {
                        return false;
                    }
                    w == v || cnt_eq[vi] - usize::from(dy >> v & 1 == 1) > 0
                });
                if supported {
                    keep |= 1 << w;
                }
            }
            if keep == 0 {
                return false;
            }
            if keep != dy {
                dom[y] = keep;
                changed.push(y);
            }
        }
        true
    }

    fn pick(&self, dom: &[Dom], among: Option<&[usize]>) -> Option<usize> {
        let mut best: Option<(u32, usize)> = None;
        let mut consider = |i: usize| {
            let s = size(dom[i]);
            if s > 1 && best.is_none_or(|(bs, _)| s < bs) {
                best = Some((s, i));
            }
        };
        match among {
            Some(keys) => keys.iter().for_each(|&i| consider(i)),
            None => (0..dom.len()).for_each(consider),
        }
        best.map(|(_, i)| i)
    }

    /// Calls `visit` on every complete labelling compatible with `dom`.
    pub fn search(&self, dom: &mut [Dom], visit: &mut dyn FnMut(&[Tri]) -> ControlFlow<()>) -> ControlFlow<()> {
        if !self.propagate(dom, 0..self.len()) {
            return ControlFlow::Continue(());
        }
        self.descend(dom, None, &mut |d| visit(&decode(d)))
    }

    /// Depth-first search over `keys` (or all nodes) from a propagated state.
    fn descend(
        &self,
        dom: &mut [Dom],
        keys: Option<&[usize]>,
        visit: &mut dyn FnMut(&[Dom]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let Some(i) = self.pick(dom, keys) else {
            return visit(dom);
        };
        for v in 0..3u8 {
            if dom[i] >> v & 1 == 0 {
                continue;
            }
            let mut next = dom.to_vec();
            if self.assign(&mut next, i, 1 << v) {
                self.descend(&mut next, keys, visit)?;
            }
        }
        ControlFlow::Continue(())
    }

    /// Some complete labelling compatible with `dom`, if any.
    pub fn find(&self, dom: &[Dom]) -> Option<Vec<Tri>> {
        let mut d = dom.to_vec();
        let mut out = None;
        let _ = self.search(&mut d, &mut |vals| {
            out = Some(vals.to_vec());
            ControlFlow::Break(())
        });
        out
    }

    /// Calls `visit` once per distinct assignment to `keys` that extends to a
    /// complete labelling compatible with `dom`; `visit` receives a witness.
    pub fn project(
        &self,
        dom: &[Dom],
        keys: &[usize],
        visit: &mut dyn FnMut(&[Tri]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let mut d = dom.to_vec();
        if !self.propagate(&mut d, 0..self.len()) {
            return ControlFlow::Continue(());
        }
        self.descend(&mut d, Some(keys), &mut |fixed| {
            let mut rest = fixed.to_vec();
            let mut witness = None;
            let _ = self.descend(&mut rest, None, &mut |full| {
                witness = Some(decode(full));
                ControlFlow::Break(())
            });
            match witness {
                Some(w) => visit(&w),
                None => ControlFlow::Continue(()),
            }
        })
    }
}

fn decode(dom: &[Dom]) -> Vec<Tri> {
    dom.iter().map(|&d| Tri::from_index(d.trailing_zeros() as u8)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(g: &Graph) -> Vec<Vec<Tri>> {
        let n = g.len();
        let mut out = Vec::new();
        for code in 0..3usize.pow(n as u32) {
            let mut c = code;
            let vals: Vec<Tri> = (0..n)
                .map(|_| {
                    let t = Tri::ALL[c % 3];
                    c /= 3;
                    t
                })
                .collect();
            if g.is_legitimate(&vals) {
                out.push(vals);
            }
        }
        out.sort();
        out
    }

    fn all(g: &Graph) -> Vec<Vec<Tri>> {
        let mut out = Vec::new();
        let _ = g.search(&mut vec![FULL; g.len()], &mut |v| {
            out.push(v.to_vec());
            ControlFlow::Continue(())
        });
        out.sort();
        out
    }

    #[test]
    fn negate_maps_max_to_complement() {
        assert_eq!(negate(single(Tri::Zero)), single(Tri::One));
        assert_eq!(negate(single(Tri::Half)), single(Tri::Half));
        assert_eq!(negate(0b011), 0b110);
    }

    #[test]
    fn search_matches_brute_force_on_all_three_node_graphs() {
        let pairs: Vec<(usize, usize)> = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
            let g = Graph::new(3, edges);
            assert_eq!(all(&g), brute(&g), "mask {mask}");
        }
    }

    #[test]
    fn projection_lists_each_key_assignment_once() {
        // a <-> b, b -> c: keys {c}
        let g = Graph::new(3, [(0, 1), (1, 0), (1, 2)]);
        let mut seen = Vec::new();
        let _ = g.project(&[FULL; 3], &[2], &mut |w| {
            seen.push(w[2]);
            ControlFlow::Continue(())
        });
        seen.sort();
        assert_eq!(seen, vec![Tri::Zero, Tri::Half, Tri::One]);
    }
}
