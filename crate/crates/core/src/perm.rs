//! Permutations in one-line notation.
//!
//! Conventions used everywhere in the crate:
//!
//! * `compose(s, t)(j) = s(t(j))`.
//! * `act_on_list(s, xs)[j] = xs[s(j)]`, so acting by `s` and then by `t`
//!   is the same as acting once by `compose(s, t)`.
//! * `block(s, [t_1, .., t_n])` with `deg t_j = k_j` is the composite in the
//!   associative operad: input block `j` (length `k_j`) is sent to output
//!   block `s(j)` and permuted internally by `t_j`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A bijection of `{1, .., n}`. Stored zero-based, displayed one-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(SmallVec<[u8; 8]>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u8).collect())
    }

    /// Builds a permutation from one-based images.
    pub fn from_images(images: &[usize]) -> Result<Perm> {
        let zero: Option<Vec<usize>> = images.iter().map(|&i| i.checked_sub(1)).collect();
        match zero {
            Some(z) => Perm::from_zero_based(&z).map_err(|_| Error::NotAPermutation(images.to_vec())),
            None => Err(Error::NotAPermutation(images.to_vec())),
        }
    }

    pub fn from_zero_based(images: &[usize]) -> Result<Perm> {
        let n = images.len();
        if n > u8::MAX as usize {
            return Err(Error::InvalidInput(format!("degree {n} is too large")));
        }
        let mut seen = vec![false; n];
        for &i in images {
            if i >= n || seen[i] {
                return Err(Error::NotAPermutation(images.iter().map(|x| x + 1).collect()));
            }
            seen[i] = true;
        }
        Ok(Perm(images.iter().map(|&i| i as u8).collect()))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// One-based image of the one-based point `j`.
    pub fn image(&self, j: usize) -> usize {
        self.0[j - 1] as usize + 1
    }

    #[inline]
    pub(crate) fn at(&self, j: usize) -> usize {
        self.0[j] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(j, &i)| j == i as usize)
    }

    pub fn compose(&self, tau: &Perm) -> Result<Perm> {
        check_degree(self.degree(), tau.degree())?;
        Ok(Perm(tau.0.iter().map(|&t| self.0[t as usize]).collect()))
    }

    pub fn inverse(&self) -> Perm {
        let mut inv: SmallVec<[u8; 8]> = SmallVec::from_elem(0, self.degree());
        for (j, &i) in self.0.iter().enumerate() {
            inv[i as usize] = j as u8;
        }
        Perm(inv)
    }

    pub fn act_on_list<T: Clone>(&self, xs: &[T]) -> Result<Vec<T>> {
        check_degree(self.degree(), xs.len())?;
        Ok(self.0.iter().map(|&i| xs[i as usize].clone()).collect())
    }

    pub fn block(&self, blocks: &[Perm]) -> Result<Perm> {
        let n = self.degree();
        check_degree(n, blocks.len())?;
        let lens: SmallVec<[usize; 8]> = blocks.iter().map(Perm::degree).collect();
        let inv = self.inverse();
        let mut out_start: SmallVec<[usize; 8]> = SmallVec::with_capacity(n);
        let mut acc = 0;
        for t in 0..n {
            out_start.push(acc);
            acc += lens[inv.at(t)];
        }
        if acc > u8::MAX as usize {
            return Err(Error::InvalidInput(format!("block degree {acc} is too large")));
        }
        let mut images = SmallVec::with_capacity(acc);
        for (j, tau) in blocks.iter().enumerate() {
            let start = out_start[self.at(j)];
            images.extend(tau.0.iter().map(|&i| (start + i as usize) as u8));
        }
        Ok(Perm(images))
    }

    /// All permutations of degree `n` in lexicographic order of their images.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut cur: Vec<u8> = (0..n as u8).collect();
        let mut out = vec![Perm(cur.iter().copied().collect())];
        loop {
            let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(Perm(cur.iter().copied().collect()));
        }
    }
}

fn check_degree(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DegreeMismatch { expected, found })
    }
}

pub fn compose(sigma: &Perm, tau: &Perm) -> Result<Perm> {
    sigma.compose(tau)
}

pub fn inverse(sigma: &Perm) -> Perm {
    sigma.inverse()
}

pub fn block(sigma: &Perm, blocks: &[Perm]) -> Result<Perm> {
    sigma.block(blocks)
}

pub fn act_on_list<T: Clone>(sigma: &Perm, xs: &[T]) -> Result<Vec<T>> {
    sigma.act_on_list(xs)
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", *i as usize + 1)?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Perm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Perm> {
        let bad = |reason: &str| Error::Parse { input: s.to_string(), reason: reason.to_string() };
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| bad("expected [..]"))?;
        if inner.trim().is_empty() {
            return Ok(Perm::identity(0));
        }
        let images = inner
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad("non-numeric image")))
            .collect::<Result<Vec<_>>>()?;
        Perm::from_images(&images)
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Perm, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Perm::from_images(&images).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(images: &[usize]) -> Perm {
        Perm::from_images(images).unwrap()
    }

    // Independent model of the block rule: cut the list into labelled blocks
    // (block i has length k_{s^-1(i)}), take block s(j) in slot j, permute it
    // internally by t_j, and read off which original position lands where.
    fn labelled_block_oracle(sigma: &Perm, blocks: &[Perm]) -> Perm {
        let n = sigma.degree();
        let inv = sigma.inverse();
        let mut source_blocks: Vec<Vec<usize>> = Vec::new();
        let mut pos = 0;
        for i in 0..n {
            let len = blocks[inv.at(i)].degree();
            source_blocks.push((pos..pos + len).collect());
            pos += len;
        }
        let mut out = Vec::new();
        for (j, tau) in blocks.iter().enumerate() {
            let taken = &source_blocks[sigma.at(j)];
            out.extend(tau.act_on_list(taken).unwrap());
        }
        Perm::from_zero_based(&out).unwrap()
    }

    #[test]
    fn compose_matches_list_oracle() {
        let s = p(&[2, 3, 1]);
        let t = p(&[2, 1, 3]);
        let xs = ["x1", "x2", "x3"];
        let step = t.act_on_list(&s.act_on_list(&xs).unwrap()).unwrap();
        let st = compose(&s, &t).unwrap();
        assert_eq!(st.act_on_list(&xs).unwrap(), step);
        assert_eq!(st, p(&[3, 2, 1]));
    }

    #[test]
    fn compose_identity_and_inverse() {
        for s in Perm::all(4) {
            assert_eq!(compose(&s, &Perm::identity(4)).unwrap(), s);
            assert!(compose(&s, &inverse(&s)).unwrap().is_identity());
            assert_eq!(inverse(&inverse(&s)), s);
        }
    }

    #[test]
    fn compose_rejects_mixed_degrees() {
        assert_eq!(
            compose(&Perm::identity(2), &Perm::identity(3)),
            Err(Error::DegreeMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse(&Perm::identity(3)), Perm::identity(3));
        let inv = inverse(&p(&[2, 3, 1]));
        assert!(compose(&p(&[2, 3, 1]), &inv).unwrap().is_identity());
        assert_eq!(inv, p(&[3, 1, 2]));
    }

    #[test]
    fn act_on_list_examples() {
        let xs = vec!["a", "b", "c"];
        assert_eq!(Perm::identity(3).act_on_list(&xs).unwrap(), xs);
        assert_eq!(p(&[2, 1]).act_on_list(&["a", "b"]).unwrap(), vec!["b", "a"]);
        assert!(matches!(p(&[2, 1]).act_on_list(&xs), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn right_action_law_sigma3() {
        let xs = ["x1", "x2", "x3"];
        for s in Perm::all(3) {
            for t in Perm::all(3) {
                let lhs = compose(&s, &t).unwrap().act_on_list(&xs).unwrap();
                let rhs = t.act_on_list(&s.act_on_list(&xs).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "s={s} t={t}");
            }
        }
    }

    #[test]
    fn right_action_law_exhaustive_up_to_4() {
        for n in 0..=4 {
            let xs: Vec<usize> = (0..n).collect();
            for s in Perm::all(n) {
                for t in Perm::all(n) {
                    let lhs = compose(&s, &t).unwrap().act_on_list(&xs).unwrap();
                    let rhs = t.act_on_list(&s.act_on_list(&xs).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn block_examples() {
        let ids = vec![Perm::identity(2), Perm::identity(0), Perm::identity(3)];
        assert!(block(&Perm::identity(3), &ids).unwrap().is_identity());
        assert_eq!(block(&p(&[2, 1]), &[Perm::identity(1), Perm::identity(1)]).unwrap(), p(&[2, 1]));

        let sigma = p(&[2, 1]);
        let blocks = [Perm::identity(2), Perm::identity(1)];
        let got = block(&sigma, &blocks).unwrap();
        assert_eq!(got, labelled_block_oracle(&sigma, &blocks));
        // Source list [B | A A]: slot 1 takes the A block, slot 2 takes B.
        assert_eq!(got.act_on_list(&["B", "A1", "A2"]).unwrap(), vec!["A1", "A2", "B"]);
        assert_eq!(got, p(&[2, 3, 1]));
    }

    #[test]
    fn block_matches_labelled_oracle_exhaustively() {
        for n in 0..=3 {
            for sigma in Perm::all(n) {
                for lens in lengths(n, 5) {
                    for blocks in perm_tuples(&lens) {
                        assert_eq!(block(&sigma, &blocks).unwrap(), labelled_block_oracle(&sigma, &blocks));
                    }
                }
            }
        }
    }

    #[test]
    fn block_degree_mismatch() {
        assert!(matches!(
            block(&Perm::identity(2), &[Perm::identity(1)]),
            Err(Error::DegreeMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn block_factorisation() {
        for n in 0..=3 {
            for sigma in Perm::all(n) {
                for lens in lengths(n, 5) {
                    let ids: Vec<Perm> = lens.iter().map(|&k| Perm::identity(k)).collect();
                    for blocks in perm_tuples(&lens) {
                        let outer = block(&sigma, &ids).unwrap();
                        let inner = block(&Perm::identity(n), &blocks).unwrap();
                        assert_eq!(block(&sigma, &blocks).unwrap(), compose(&outer, &inner).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn block_equivariance_up_to_degree_6() {
        // Top: block(s t, [g_{t(j)}]) = block(s, g) . block(t, [id_{k_{t(j)}}])
        // Bottom: block(s, [g_j h_j]) = block(s, g) . block(id, h)
        for n in 0..=3 {
            for lens in lengths(n, 6) {
                let tuples = perm_tuples(&lens);
                for s in Perm::all(n) {
                    for g in &tuples {
                        let sg = block(&s, g).unwrap();
                        for t in Perm::all(n) {
                            let gt = t.act_on_list(g).unwrap();
                            let ids: Vec<Perm> = gt.iter().map(|x| Perm::identity(x.degree())).collect();
                            let lhs = block(&compose(&s, &t).unwrap(), &gt).unwrap();
                            let rhs = compose(&sg, &block(&t, &ids).unwrap()).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                        if tuples.len() <= 48 {
                            for h in &tuples {
                                let gh: Vec<Perm> = g.iter().zip(h).map(|(a, b)| compose(a, b).unwrap()).collect();
                                let lhs = block(&s, &gh).unwrap();
                                let rhs = compose(&sg, &block(&Perm::identity(n), h).unwrap()).unwrap();
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn all_is_lexicographic() {
        let v = Perm::all(3);
        assert_eq!(v.len(), 6);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(Perm::all(0), vec![Perm::identity(0)]);
    }

    #[test]
    fn text_and_serde_forms() {
        let s = p(&[2, 3, 1]);
        assert_eq!(s.to_string(), "[2,3,1]");
        assert_eq!("[2,3,1]".parse::<Perm>().unwrap(), s);
        assert_eq!("[]".parse::<Perm>().unwrap(), Perm::identity(0));
        assert!("[1,1]".parse::<Perm>().is_err());
        assert!("[0,1]".parse::<Perm>().is_err());
    }

    pub(crate) fn lengths(n: usize, max_total: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| {
                    let used: usize = v.iter().sum();
                    (0..=max_total - used).map(move |k| {
                        let mut w = v.clone();
                        w.push(k);
                        w
                    })
                })
                .collect();
        }
        out
    }

    pub(crate) fn perm_tuples(lens: &[usize]) -> Vec<Vec<Perm>> {
        let mut out = vec![vec![]];
        for &k in lens {
            out = out
                .into_iter()
                .flat_map(|v| {
                    Perm::all(k).into_iter().map(move |p| {
                        let mut w = v.clone();
                        w.push(p);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn arb_perm(max: usize) -> impl Strategy<Value = Perm> {
        (0..=max).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| Perm::from_zero_based(&v).unwrap())
    }

    fn arb_same_degree(n: usize) -> impl Strategy<Value = (Perm, Perm)> {
        let one = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
        (one.clone(), one).prop_map(|(a, b)| (Perm::from_zero_based(&a).unwrap(), Perm::from_zero_based(&b).unwrap()))
    }

    proptest! {
        #[test]
        fn prop_right_action((s, t) in (0usize..7).prop_flat_map(arb_same_degree)) {
            let xs: Vec<usize> = (0..s.degree()).map(|i| i * 10).collect();
            prop_assert_eq!(
                compose(&s, &t).unwrap().act_on_list(&xs).unwrap(),
                t.act_on_list(&s.act_on_list(&xs).unwrap()).unwrap()
            );
        }

        #[test]
        fn prop_block_unit(s in arb_perm(6), t in arb_perm(6)) {
            let ones = vec![Perm::identity(1); s.degree()];
            prop_assert_eq!(block(&s, &ones).unwrap(), s);
            prop_assert_eq!(block(&Perm::identity(1), &[t.clone()]).unwrap(), t);
        }

        #[test]
        fn prop_block_associative(
            s in arb_perm(3),
            seed in proptest::collection::vec(arb_perm(2), 3),
            inner in proptest::collection::vec(arb_perm(1), 6),
        ) {
            // block(block(s, g), h) = block(s, [block(g_j, h_j)])
            let g: Vec<Perm> = seed[..s.degree()].to_vec();
            let total: usize = g.iter().map(Perm::degree).sum();
            let h: Vec<Perm> = inner[..total].to_vec();
            let lhs = block(&block(&s, &g).unwrap(), &h).unwrap();
            let mut off = 0;
            let mut regrouped = Vec::new();
            for gj in &g {
                regrouped.push(block(gj, &h[off..off + gj.degree()]).unwrap());
                off += gj.degree();
            }
            prop_assert_eq!(lhs, block(&s, &regrouped).unwrap());
        }

        #[test]
        fn prop_inverse_involution(s in arb_perm(8)) {
            prop_assert_eq!(inverse(&inverse(&s)), s.clone());
            prop_assert!(compose(&inverse(&s), &s).unwrap().is_identity());
        }
    }
}
