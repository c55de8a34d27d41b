use std::fmt::Debug;

use super::Kappa;

/// Probability rows must sum to one within this tolerance.
pub const PROB_ROW_TOLERANCE: f64 = 1e-9;

/// Which quantification a network carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Kappa,
    Prob,
}

/// Why a conditional row is not a legal distribution.
#[derive(Clone, Debug, PartialEq)]
pub enum RowDefect {
    KappaNotNormalized { min: Kappa },
    ProbabilityOutOfRange { value: f64 },
    ProbabilitySum { sum: f64 },
}

/// Entry type of a conditional table: kappa ranks or probabilities.
pub trait Quantity: Copy + PartialEq + Debug + Send + Sync + 'static {
    const KIND: Kind;
    /// Entry of the forced value after action surgery.
    const CERTAIN: Self;
    /// Entry of every other value after action surgery.
    const IMPOSSIBLE: Self;

    fn check_row(row: &[Self]) -> Result<(), RowDefect>;
}

impl Quantity for Kappa {
    const KIND: Kind = Kind::Kappa;
    const CERTAIN: Self = Kappa::ZERO;
    const IMPOSSIBLE: Self = Kappa::INFINITY;

    fn check_row(row: &[Self]) -> Result<(), RowDefect> {
        let min = row.iter().copied().min().unwrap_or(Kappa::INFINITY);
        if min.is_zero() {
            Ok(())
        } else {
            Err(RowDefect::KappaNotNormalized { min })
        }
    }
}

impl Quantity for f64 {
    const KIND: Kind = Kind::Prob;
    const CERTAIN: Self = 1.0;
    const IMPOSSIBLE: Self = 0.0;

    fn check_row(row: &[Self]) -> Result<(), RowDefect> {
        if let Some(&value) = row.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(RowDefect::ProbabilityOutOfRange { value });
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > PROB_ROW_TOLERANCE {
            return Err(RowDefect::ProbabilitySum { sum });
        }
        Ok(())
    }
}

/// Conditional table `Q(child | parents)` stored row-major.
///
/// Rows are indexed by the mixed-radix number of the parent instantiation, first
/// parent most significant. Within a row, entries follow the child's value order.
#[derive(Clone, Debug, PartialEq)]
pub struct Table<Q> {
    child: usize,
    parents: Vec<usize>,
    parent_cards: Vec<usize>,
    child_card: usize,
    entries: Vec<Q>,
}

impl<Q: Quantity> Table<Q> {
    /// Build a table; `entries.len()` must equal rows × child cardinality.
    pub fn new(
        child: usize,
        child_card: usize,
        parents: Vec<usize>,
        parent_cards: Vec<usize>,
        entries: Vec<Q>,
    ) -> Self {
        assert_eq!(parents.len(), parent_cards.len());
        let rows: usize = parent_cards.iter().product();
        assert_eq!(entries.len(), rows * child_card, "table shape mismatch");
        Table {
            child,
            parents,
            parent_cards,
            child_card,
            entries,
        }
    }

    /// Unconditional table for a root.
    pub fn prior(child: usize, entries: Vec<Q>) -> Self {
        let card = entries.len();
        Table::new(child, card, Vec::new(), Vec::new(), entries)
    }

    pub fn child(&self) -> usize {
        self.child
    }

    /// Parent variables in this table's row-key order.
    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn parent_cards(&self) -> &[usize] {
        &self.parent_cards
    }

    pub fn child_card(&self) -> usize {
        self.child_card
    }

    pub fn row_count(&self) -> usize {
        self.parent_cards.iter().product()
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.entries[r * self.child_card..(r + 1) * self.child_card]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Q]> {
        self.entries.chunks(self.child_card)
    }

    pub fn entries(&self) -> &[Q] {
        &self.entries
    }

    /// Row index for parent values given in table parent order.
    pub fn row_index(&self, parent_values: &[usize]) -> usize {
        debug_assert_eq!(parent_values.len(), self.parents.len());
        parent_values
            .iter()
            .zip(&self.parent_cards)
            .fold(0, |acc, (&value, &card)| acc * card + value)
    }

    /// Row index from a full assignment indexed by variable.
    pub fn row_index_in(&self, world: &[usize]) -> usize {
        self.parents
            .iter()
            .zip(&self.parent_cards)
            .fold(0, |acc, (&p, &card)| acc * card + world[p])
    }

    /// Parent values (table parent order) of row `r`.
    pub fn row_key(&self, mut r: usize) -> Vec<usize> {
        let mut key = vec![0; self.parents.len()];
        for (slot, &card) in key.iter_mut().zip(&self.parent_cards).rev() {
            *slot = r % card;
            r /= card;
        }
        key
    }

    pub fn get(&self, row: usize, value: usize) -> Q {
        self.entries[row * self.child_card + value]
    }

    /// Entry for the child's value in `world`, under the parents' values in `world`.
    pub fn lookup(&self, world: &[usize]) -> Q {
        self.get(self.row_index_in(world), world[self.child])
    }

    pub(crate) fn map<R: Quantity>(&self, f: impl FnMut(Q) -> R) -> Table<R> {
        Table {
            child: self.child,
            parents: self.parents.clone(),
            parent_cards: self.parent_cards.clone(),
            child_card: self.child_card,
            entries: self.entries.iter().copied().map(f).collect(),
        }
    }

    pub(crate) fn rows_mut(&mut self) -> impl Iterator<Item = &mut [Q]> {
        self.entries.chunks_mut(self.child_card)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_radix_rows() {
        // child 2 (binary) with parents 0 (card 3) and 1 (card 2)
        let entries: Vec<f64> = (0..6).flat_map(|_| [0.5, 0.5]).collect();
        let t = Table::new(2, 2, vec![0, 1], vec![3, 2], entries);
        assert_eq!(t.row_count(), 6);
        assert_eq!(t.row_index(&[2, 1]), 5);
        assert_eq!(t.row_key(5), vec![2, 1]);
        assert_eq!(t.row_key(2), vec![1, 0]);
        assert_eq!(t.row_index_in(&[1, 1, 0]), 3);
    }

    #[test]
    fn row_checks() {
        assert!(Kappa::check_row(&[Kappa::ZERO, Kappa::INFINITY]).is_ok());
        assert_eq!(
            Kappa::check_row(&[Kappa::ONE, Kappa::finite(2)]),
            Err(RowDefect::KappaNotNormalized { min: Kappa::ONE })
        );
        assert!(f64::check_row(&[0.3, 0.7]).is_ok());
        assert!(f64::check_row(&[0.3, 0.7 + 1e-10]).is_ok());
        assert!(matches!(
            f64::check_row(&[0.3, 0.6]),
            Err(RowDefect::ProbabilitySum { .. })
        ));
        assert!(matches!(
            f64::check_row(&[-0.1, 1.1]),
            Err(RowDefect::ProbabilityOutOfRange { .. })
        ));
    }
}
