//! Coalition structures and the partition-function game induced by a
//! bankruptcy rule, plus its optimistic, pessimistic and resource-allocation
//! characteristic games.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::bankruptcy::{apply_rule, BankruptcyProblem, Rule};
use crate::error::{Error, Result};
use crate::game::{CharacteristicGame, Coalition, MAX_PLAYERS};
use crate::production::LppSituation;
use crate::rational::{sum, Rational};

pub const DEFAULT_PARTITION_LIMIT: usize = 10;

/// Blocks sorted by least member, so equal partitions compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Coalition>,
}

impl Partition {
    pub fn new(mut blocks: Vec<Coalition>, n: usize) -> Result<Self> {
        let mut seen = 0u32;
        for b in &blocks {
            if b.is_empty() || seen & b.mask() != 0 {
                return Err(Error::Domain("partition blocks must be nonempty and disjoint".into()));
            }
            seen |= b.mask();
        }
        if seen != Coalition::grand(n).mask() {
            return Err(Error::Domain(format!("partition blocks do not cover all {n} players")));
        }
        blocks.sort_by_key(|b| b.least_member());
        Ok(Partition { blocks })
    }

    pub fn singletons(n: usize) -> Self {
        Partition { blocks: (0..n).map(Coalition::singleton).collect() }
    }

    /// `{S} ∪ {{i} : i ∉ S}`.
    pub fn with_singletons(s: Coalition, n: usize) -> Self {
        let mut blocks = vec![s];
        blocks.extend((0..n).filter(|&i| !s.contains(i)).map(Coalition::singleton));
        blocks.sort_by_key(|b| b.least_member());
        Partition { blocks }
    }

    pub fn blocks(&self) -> &[Coalition] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn position(&self, s: Coalition) -> Option<usize> {
        self.blocks.iter().position(|&b| b == s)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "}}")
    }
}

/// Bell numbers by the Bell triangle.
pub fn bell_number(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}

fn partitions_cache() -> &'static Mutex<HashMap<usize, Arc<Vec<Partition>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Partition>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Every partition of `n` players, most blocks first and then in
/// restricted-growth-string order. For three players this is
/// `{1},{2},{3}`, `{1,2},{3}`, `{1,3},{2}`, `{1},{2,3}`, `{1,2,3}`.
pub fn enumerate_partitions(n: usize, limit: usize) -> Result<Arc<Vec<Partition>>> {
    if n == 0 {
        return Err(Error::Domain("cannot partition an empty player set".into()));
    }
    if n > limit || n > MAX_PLAYERS {
        return Err(Error::SizeLimit(format!(
            "{n} players exceed the partition limit {limit} (Bell({n}) = {} partitions)",
            bell_number(n)
        )));
    }
    if let Some(cached) = partitions_cache().lock().unwrap().get(&n) {
        return Ok(cached.clone());
    }
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    loop {
        let k = labels.iter().max().unwrap() + 1;
        let mut blocks = vec![0u32; k];
        for (i, &l) in labels.iter().enumerate() {
            blocks[l] |= 1 << i;
        }
        out.push(Partition { blocks: blocks.into_iter().map(Coalition::from_mask).collect() });
        // next restricted growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                out.sort_by_key(|p| std::cmp::Reverse(p.len()));
                let out = Arc::new(out);
                partitions_cache().lock().unwrap().insert(n, out.clone());
                return Ok(out);
            }
            let prefix_max = labels[..i].iter().max().copied().unwrap();
            if labels[i] <= prefix_max {
                labels[i] += 1;
                for l in labels.iter_mut().skip(i + 1) {
                    *l = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub block: Coalition,
    /// `f(S|P)`, permits awarded to the block.
    pub share: Rational,
    /// `V^f(S|P) = value(S; f(S|P))`.
    pub value: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Plus,
    Minus,
}

/// The f-LPP game in partition function form.
#[derive(Debug, Clone)]
pub struct PartitionFunctionGame {
    situation: LppSituation,
    rule: Rule,
    demands: Vec<Rational>,
    partitions: Arc<Vec<Partition>>,
    /// `cells[p][k]` is block `k` of partition `p`.
    cells: Vec<Vec<Cell>>,
    /// For each coalition mask, the `(partition, block)` pairs holding it.
    occurrences: Vec<Vec<(usize, usize)>>,
}

/// Permit shares for one coalition structure: demands in full when they fit
/// under the cap, otherwise the rule applied with the blocks as claimants.
pub fn partition_shares(rule: Rule, cap: &Rational, claims: &[Rational]) -> Vec<Rational> {
    if sum(claims) <= *cap {
        claims.to_vec()
    } else {
        let prob = BankruptcyProblem::new(cap.clone(), claims.to_vec())
            .expect("claims exceed a positive cap");
        apply_rule(rule, &prob)
    }
}

pub fn build_game(sit: &LppSituation, rule: Rule) -> Result<PartitionFunctionGame> {
    build_game_with_limit(sit, rule, DEFAULT_PARTITION_LIMIT)
}

pub fn build_game_with_limit(sit: &LppSituation, rule: Rule, limit: usize) -> Result<PartitionFunctionGame> {
    let n = sit.n_firms();
    let partitions = enumerate_partitions(n, limit)?;
    let demands = sit.all_demands()?;
    let mut memo: HashMap<(Coalition, Rational), Rational> = HashMap::new();
    let mut cells = Vec::with_capacity(partitions.len());
    let mut occurrences = vec![Vec::new(); 1 << n];
    for (pi, p) in partitions.iter().enumerate() {
        let claims: Vec<Rational> = p.blocks().iter().map(|b| demands[b.mask() as usize].clone()).collect();
        let shares = partition_shares(rule, sit.cap(), &claims);
        let mut row = Vec::with_capacity(p.len());
        for (k, (&block, share)) in p.blocks().iter().zip(shares).enumerate() {
            let key = (block, share);
            let value = match memo.get(&key) {
                Some(v) => v.clone(),
                None => {
                    let v = sit.coalition_value(block, &key.1)?;
                    memo.insert(key.clone(), v.clone());
                    v
                }
            };
            occurrences[block.mask() as usize].push((pi, k));
            row.push(Cell { block, share: key.1, value });
        }
        cells.push(row);
    }
    Ok(PartitionFunctionGame {
        situation: sit.clone(),
        rule,
        demands,
        partitions,
        cells,
        occurrences,
    })
}

impl PartitionFunctionGame {
    pub fn situation(&self) -> &LppSituation {
        &self.situation
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn players(&self) -> usize {
        self.situation.n_firms()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn demand(&self, s: Coalition) -> &Rational {
        &self.demands[s.mask() as usize]
    }

    pub fn cells(&self, partition: usize) -> &[Cell] {
        &self.cells[partition]
    }

    pub fn partition_index(&self, p: &Partition) -> Option<usize> {
        self.partitions.iter().position(|q| q == p)
    }

    fn cell(&self, s: Coalition, p: &Partition) -> Option<&Cell> {
        let pi = self.partition_index(p)?;
        let k = p.position(s)?;
        Some(&self.cells[pi][k])
    }

    /// `V^f(S|P)`; `None` when `S ∉ P`.
    pub fn value(&self, s: Coalition, p: &Partition) -> Option<&Rational> {
        self.cell(s, p).map(|c| &c.value)
    }

    /// `f(S|P)`; `None` when `S ∉ P`.
    pub fn share(&self, s: Coalition, p: &Partition) -> Option<&Rational> {
        self.cell(s, p).map(|c| &c.share)
    }

    /// Cells of `s` across every partition containing it, in partition order.
    pub fn cells_of(&self, s: Coalition) -> impl Iterator<Item = (usize, &Cell)> {
        self.occurrences[s.mask() as usize]
            .iter()
            .map(move |&(pi, k)| (pi, &self.cells[pi][k]))
    }

    pub fn grand_value(&self) -> &Rational {
        let (_, cell) = self.cells_of(self.situation.grand_coalition()).next().unwrap();
        &cell.value
    }

    pub fn grand_share(&self) -> &Rational {
        let (_, cell) = self.cells_of(self.situation.grand_coalition()).next().unwrap();
        &cell.share
    }

    /// `v^-(S) = min_{P∋S} V^f(S|P)`.
    pub fn pessimistic_game(&self) -> CharacteristicGame {
        CharacteristicGame::from_fn(self.players(), |s| {
            self.cells_of(s).map(|(_, c)| &c.value).min().unwrap().clone()
        })
    }

    /// `v^+(S) = max_{P∋S} V^f(S|P)`.
    pub fn optimistic_game(&self) -> CharacteristicGame {
        CharacteristicGame::from_fn(self.players(), |s| {
            self.cells_of(s).map(|(_, c)| &c.value).max().unwrap().clone()
        })
    }

    /// The partition defining `R^±(S)`: among the partitions maximizing
    /// (`Plus`) or minimizing (`Minus`) `V^f(S|P)`, the first one granting
    /// `S` the fewest permits.
    pub fn resource_witness(&self, sense: Sense, s: Coalition) -> &Partition {
        let extreme = match sense {
            Sense::Plus => self.cells_of(s).map(|(_, c)| &c.value).max(),
            Sense::Minus => self.cells_of(s).map(|(_, c)| &c.value).min(),
        }
        .unwrap();
        let (pi, _) = self
            .cells_of(s)
            .filter(|(_, c)| &c.value == extreme)
            .min_by(|(_, a), (_, b)| a.share.cmp(&b.share))
            .unwrap();
        &self.partitions[pi]
    }

    /// `R_f^±`, the permit game behind the optimistic or pessimistic game.
    pub fn resource_game(&self, sense: Sense) -> CharacteristicGame {
        CharacteristicGame::from_fn(self.players(), |s| {
            let p = self.resource_witness(sense, s);
            self.share(s, p).unwrap().clone()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::production::fixtures::example_economy;
    use crate::rational::{int, ratio, rounded};

    fn s(members: &[usize]) -> Coalition {
        Coalition::from_members(members.iter().map(|i| i - 1))
    }

    fn part(blocks: &[&[usize]]) -> Partition {
        Partition::new(blocks.iter().map(|b| s(b)).collect(), 3).unwrap()
    }

    #[test]
    fn bell_numbers() {
        let expected = [1u128, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];
        for (n, b) in expected.iter().enumerate() {
            assert_eq!(bell_number(n), *b);
        }
    }

    #[test]
    fn enumeration_counts_and_order() {
        for n in 1..=7 {
            let all = enumerate_partitions(n, 10).unwrap();
            assert_eq!(all.len() as u128, bell_number(n));
            let distinct: std::collections::HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
        }
        let three: Vec<String> = enumerate_partitions(3, 10).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(
            three,
            [
                "{{1}, {2}, {3}}",
                "{{1,2}, {3}}",
                "{{1,3}, {2}}",
                "{{1}, {2,3}}",
                "{{1,2,3}}"
            ]
        );
    }

    #[test]
    fn enumeration_refuses_past_the_limit() {
        assert!(matches!(enumerate_partitions(11, 10), Err(Error::SizeLimit(_))));
        assert!(enumerate_partitions(4, 3).is_err());
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![s(&[1, 2]), s(&[2, 3])], 3).is_err());
        assert!(Partition::new(vec![s(&[1, 2])], 3).is_err());
        assert_eq!(Partition::new(vec![s(&[3]), s(&[1, 2])], 3).unwrap(), part(&[&[1, 2], &[3]]));
    }

    #[test]
    fn cea_game_values() {
        let g = build_game(&example_economy(), Rule::Cea).unwrap();
        let p1 = part(&[&[1], &[2], &[3]]);
        let p2 = part(&[&[1, 2], &[3]]);
        let p3 = part(&[&[1, 3], &[2]]);
        let p4 = part(&[&[2, 3], &[1]]);
        let p5 = part(&[&[1, 2, 3]]);
        assert_eq!(g.value(s(&[1]), &p1).unwrap(), &ratio(2000, 3));
        assert_eq!(g.value(s(&[2]), &p1).unwrap(), &ratio(2300, 3));
        assert_eq!(g.value(s(&[3]), &p1).unwrap(), &ratio(2300, 3));
        assert_eq!(g.value(s(&[1, 2]), &p2).unwrap(), &int(1150));
        assert_eq!(g.value(s(&[3]), &p2).unwrap(), &int(1150));
        assert_eq!(g.value(s(&[1, 3]), &p3).unwrap(), &int(1380));
        assert_eq!(g.value(s(&[2]), &p3).unwrap(), &int(920));
        assert_eq!(g.value(s(&[2, 3]), &p4).unwrap(), &int(1380));
        assert_eq!(g.value(s(&[1]), &p4).unwrap(), &int(720));
        assert_eq!(g.value(s(&[1, 2, 3]), &p5).unwrap(), &int(2300));
        assert_eq!(g.share(s(&[1, 3]), &p3).unwrap(), &int(30));
        assert!(g.value(s(&[1, 2]), &p1).is_none());
    }

    #[test]
    fn prop_game_values_are_exact() {
        let g = build_game(&example_economy(), Rule::Prop).unwrap();
        let p3 = part(&[&[1, 3], &[2]]);
        assert_eq!(g.share(s(&[1, 3]), &p3).unwrap(), &ratio(1150, 33));
        assert_eq!(g.value(s(&[1, 3]), &p3).unwrap(), &ratio(52900, 33));
        assert_eq!(rounded(g.value(s(&[2]), &p3).unwrap(), 2), ratio(69697, 100));
        // valuing the share rounded to hundredths gives 46 * 34.85
        let sit = example_economy();
        let coarse = rounded(g.share(s(&[1, 3]), &p3).unwrap(), 2);
        assert_eq!(sit.coalition_value(s(&[1, 3]), &coarse).unwrap(), ratio(160310, 100));
    }

    #[test]
    fn derived_games() {
        let g = build_game(&example_economy(), Rule::Cea).unwrap();
        let lo = g.pessimistic_game();
        let hi = g.optimistic_game();
        assert_eq!(lo.value(s(&[1])), &ratio(2000, 3));
        assert_eq!(lo.value(s(&[2])), &ratio(2300, 3));
        assert_eq!(lo.value(s(&[1, 2])), &int(1150));
        assert_eq!(hi.value(s(&[1])), &int(720));
        assert_eq!(hi.value(s(&[2])), &int(920));
        assert_eq!(hi.value(s(&[3])), &int(1150));
        assert_eq!(lo.grand_value(), &int(2300));
        assert_eq!(hi.grand_value(), &int(2300));

        let rp = g.resource_game(Sense::Plus);
        let rm = g.resource_game(Sense::Minus);
        let order = [s(&[1]), s(&[2]), s(&[3]), s(&[1, 2]), s(&[1, 3]), s(&[2, 3]), s(&[1, 2, 3])];
        let plus: Vec<_> = order.iter().map(|&c| rp.value(c).clone()).collect();
        let minus: Vec<_> = order.iter().map(|&c| rm.value(c).clone()).collect();
        assert_eq!(plus, [20, 20, 25, 25, 30, 30, 50].map(int));
        let third = ratio(50, 3);
        assert_eq!(
            minus,
            [third.clone(), third.clone(), third, int(25), int(30), int(30), int(50)]
        );
        assert_eq!(g.resource_witness(Sense::Plus, s(&[3])), &part(&[&[1, 2], &[3]]));
    }

    #[test]
    fn abundant_cap_removes_externalities() {
        let sit = example_economy().with_cap(int(200)).unwrap();
        let g = build_game(&sit, Rule::Cea).unwrap();
        for mask in 1..8u32 {
            let c = Coalition::from_mask(mask);
            let values: Vec<_> = g.cells_of(c).map(|(_, cell)| cell.value.clone()).collect();
            assert!(values.windows(2).all(|w| w[0] == w[1]));
            assert!(g.cells_of(c).all(|(_, cell)| &cell.share == g.demand(c)));
        }
    }
}
