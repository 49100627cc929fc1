use super::{CircuitError, GateKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FullAdderBits {
    pub sum: bool,
    pub sum_bar: bool,
    pub cout: bool,
    pub cout_bar: bool,
}

/// Sum and carry written as sums of products over `a`, `b`, `c`, with the
/// complements as exact negations.
pub fn full_adder_oracle(a: bool, b: bool, c: bool) -> FullAdderBits {
    let sum = (a && b && c) || (a && !b && !c) || (!a && b && !c) || (!a && !b && c);
    let cout = (a && b) || (a && c) || (b && c);
    FullAdderBits {
        sum,
        sum_bar: !sum,
        cout,
        cout_bar: !cout,
    }
}

/// Expected rail values in the order of [`GateKind::output_pairs`], true rail
/// first in each pair.
pub fn gate_oracle(kind: GateKind, inputs: &[bool]) -> Result<Vec<bool>, CircuitError> {
    if inputs.len() != kind.arity() {
        return Err(CircuitError::Arity {
            kind,
            expected: kind.arity(),
            found: inputs.len(),
        });
    }
    Ok(match kind {
        GateKind::AndNand => {
            let y = inputs[0] && inputs[1];
            vec![y, !y]
        }
        GateKind::XorXnor => {
            let y = inputs[0] ^ inputs[1];
            vec![y, !y]
        }
        GateKind::FullAdder => {
            let f = full_adder_oracle(inputs[0], inputs[1], inputs[2]);
            vec![f.sum, f.sum_bar, f.cout, f.cout_bar]
        }
    })
}
