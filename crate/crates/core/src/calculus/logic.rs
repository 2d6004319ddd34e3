//! Connectives on zero tests, reading `[t]` as "t = 0 holds".

use crate::meadow::DataTerm;

fn unit(t: &DataTerm) -> DataTerm {
    t.clone() / t.clone()
}

/// `[tnot(t)] = [1 - t/t]`.
pub fn tnot(t: &DataTerm) -> DataTerm {
    DataTerm::one() - unit(t)
}

/// `[tand(t, s)] = [t/t + s/s]`.
pub fn tand(t: &DataTerm, s: &DataTerm) -> DataTerm {
    unit(t) + unit(s)
}

/// `[tor(t, s)] = [t * s]`.
pub fn tor(t: &DataTerm, s: &DataTerm) -> DataTerm {
    t.clone() * s.clone()
}

/// `[timp(t, s)] = [(1 - t/t) * s]`.
pub fn timp(t: &DataTerm, s: &DataTerm) -> DataTerm {
    tnot(t) * s.clone()
}
