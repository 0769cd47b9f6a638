use crate::syntax::Expr;

/// Information order on values: ⊥ below everything, variables above
/// everything, otherwise componentwise under the same head symbol.
pub fn term_leq(a: &Expr, b: &Expr) -> bool {
    match (a, b) {
        (Expr::Bot, _) | (_, Expr::Var(_)) => true,
        (Expr::Int(x), Expr::Int(y)) => x == y,
        (Expr::Con(k1, n1, xs), Expr::Con(k2, n2, ys)) | (Expr::Fun(k1, n1, xs), Expr::Fun(k2, n2, ys)) => {
            k1 == k2 && n1 == n2 && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_leq(x, y))
        }
        (Expr::Prim(p, xs), Expr::Prim(q, ys)) => p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_leq(x, y)),
        _ => false,
    }
}

pub fn tuple_leq(xs: &[Expr], ys: &[Expr]) -> bool {
    xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_leq(x, y))
}

/// Strictly below: `a ⊑ b` but not `b ⊑ a`.
pub fn term_lt(a: &Expr, b: &Expr) -> bool {
    term_leq(a, b) && !term_leq(b, a)
}
