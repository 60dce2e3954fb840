//! Fixed table mapping every claim identifier emitted in a report to a
//! short description of the mathematical statement it checks or evaluates.
//! Report entries only ever carry strings from this table.

pub const TABLE: &[(&str, &str)] = &[
    ("reflex-norm-matrix", "character matrix of the reflex norm (columns: embeddings of E)"),
    ("mt-rank", "rank of the Mumford-Tate torus = rank of the reflex-norm character matrix"),
    ("component-group-order", "|F|: torsion of the cokernel of the character map, bounded by f(rank)"),
    ("determinant-bound", "f(x) = floor((x+1)^((x+1)/2) / 2^x), Hadamard bound for 0/1 matrices"),
    ("hadamard-max-det", "maximal |det| of x-by-x matrices with entries in {0,1} is at most f(x)"),
    ("ell-part", "l-adic valuation and absolute value |m|_l = l^(-v_l(m))"),
    ("degree-rank", "division-field degree between l^(nr)/(4 mu sqrt(g!)) and (5/2) mu h(K) l^(nr)"),
    ("torus-order-good-reduction", "torus of dimension d with good reduction: (1-1/l)^d l^(nd) <= |T(Z/l^n)| <= (1+1/l)^d l^(nd)"),
    ("good-reduction-prime", "the torus attached to E has good reduction at primes not dividing disc(E)"),
    ("mt-order-unramified", "Mumford-Tate order at l unramified in E: within (1 -/+ 1/l)^r l^(nr)"),
    ("mt-order-nondegenerate", "Mumford-Tate order for nondegenerate CM types (separate l = 2 branch)"),
    ("index-galois-in-mt", "index of G cap MT(Z_l) in G is at most |mu(E)| h(K)"),
    ("index-mt-universal", "index of G cap MT(Z_l) in MT(Z_l) is at most mu* [K:E*] |F|^(2r)"),
    ("index-mt-universal-sharp", "intermediate form mu* [K:E*] (|F| |F|_l^(-1))^r of the universal index bound"),
    ("index-mt-divisibility", "l unramified in E, l not dividing |F|: index divides mu* [K:E*] |F| (mu* |F| if l unramified in K)"),
    ("index-mod-ell", "good reduction, l unramified in E: index of G_l in MT(F_l) divides [K:E*] |F| (|F| if unramified in K)"),
    ("division-field-degree", "degree of K(A[l^n])/K: Mumford-Tate order bounds combined with index bounds"),
    ("unit-count", "|((Z/l^N)[x]/(f))^x| by exhaustive enumeration"),
    ("hodge-order", "Hodge points {u : u tau(u) = 1} by exhaustive enumeration"),
    ("mt-order-enumerated", "Mumford-Tate points {u : u tau(u) scalar unit} by exhaustive enumeration"),
    ("psi-image-index", "image of (h, s) -> h s has index 1 or 2 in MT; index 1 iff every u tau(u) is a square"),
    ("filtration-quotients", "norm-one filtration: |C(0)/C(1)| = l+1 (unramified) or 2l (ramified), |C(k)/C(k+1)| = l for k >= 1"),
    ("cartan-normalizer-index", "Cartan subgroup has index 2 in its normalizer, the stabilizer of the plane Pi"),
    ("family-rank", "y^p = x(1-x): Mumford-Tate rank (p+1)/2, nondegenerate CM type"),
    ("family-ratio", "y^p = x(1-x): ratio 2^((p+1)/2) / p between l^(nr) and the 2-torsion degree p"),
    ("selftest-criterion", "acceptance criterion of the built-in self-test"),
];

/// Description for a claim id. Panics on an unknown id: every emitted
/// claim must be registered above.
pub fn for_claim(id: &str) -> &'static str {
    TABLE
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, v)| *v)
        .unwrap_or_else(|| panic!("unregistered claim id {id:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = TABLE.iter().map(|(k, _)| *k).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), TABLE.len());
    }
}
