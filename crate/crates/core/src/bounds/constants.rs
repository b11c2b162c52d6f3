//! Every numeric constant of the bound formulas, with the display fragment it
//! was transcribed from. The formulas refer to these names only.

/// One transcribed constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant {
    pub name: &'static str,
    pub value: f64,
    pub anchor: &'static str,
}

pub const ANCHOR_ENSTROPHY_INTEGRAL: &str = r"1.075 \cdot 10^{22}";
pub const ANCHOR_L2EPS_NORM: &str = r"e^{4.22 \ N^{\frac{1}{2}}(t_2-t_1)}";
pub const ANCHOR_WEIGHTED_GRAD: &str = r"\frac{1.97}{\nu}";
pub const ANCHOR_GRAD_L2: &str = r"8.16 \cdot 10^4";
pub const ANCHOR_SECOND_GRAD: &str = r"\frac{1.945}{\nu}";
pub const ANCHOR_GRAD_3EPS: &str = r"2.48 \cdot 10^3";
pub const ANCHOR_LP_SUP_GROWTH: &str = r"1.1 \cdot 10^5 (N^2+1)";
pub const ANCHOR_N_THRESHOLD: &str = r"2.07 \sqrt{N} + 12.78";
pub const ANCHOR_ENVELOPE: &str = r"e^{\frac{1}{n}e^{e^{t_2-t_1}}}";
pub const ANCHOR_SCHEDULE: &str = r"t_0 = \frac{\nu}{2 C |\omega|_{\infty}^2(0)}";

// enstrophy time integral
pub const ENSTROPHY_LEAD: f64 = 1.075e22;
pub const ENSTROPHY_MID: f64 = 9.6;
pub const ENSTROPHY_TAIL: f64 = 4.57;

// shared growth bracket
pub const GROWTH_RATE: f64 = 4.22;
pub const BRACKET_LEAD: f64 = 3.99e26;
pub const BRACKET_SQRT_N: f64 = 3.562e5;
pub const BRACKET_N: f64 = 1.7e5;
pub const BRACKET_TIME: f64 = 0.371e5;
pub const BRACKET_SQRT_N_TIME: f64 = 1.066;
pub const BRACKET_POWER: f64 = 5.0;
/// Printed literal exponents `nu^{4.02}` and `N^{2.01}` (the `eps = 1/100` values).
pub const PRINTED_NU_POWER: f64 = 4.02;
pub const PRINTED_N_POWER: f64 = 2.01;
/// Printed exponent of the `t_1` norm in the innermost bracket of the
/// `3 + eps` and threshold displays.
pub const PRINTED_INNER_NORM_POWER: f64 = 0.76153;

// weighted gradient integral
pub const WEIGHTED_PREFACTOR: f64 = 1.97;

// |grad w|_2 at t2
pub const GRAD_L2_TIME: f64 = 8.16e4;
pub const GRAD_L2_C: f64 = 60.0;
pub const GRAD_L2_TOWER: f64 = 2.432e7;

// int |grad grad w|^2
pub const SECOND_GRAD_PREFACTOR: f64 = 1.945;
pub const SECOND_GRAD_TIME: f64 = 1.632e5;
pub const SECOND_GRAD_C: f64 = 120.0;
pub const SECOND_GRAD_TOWER: f64 = 4.864e7;

// |grad w|_{3+eps}
pub const GRAD_3EPS_C: f64 = 2.48e3;
pub const GRAD_3EPS_TIME: f64 = 3.58e4;
pub const GRAD_3EPS_MID: f64 = 3.78e4;
pub const GRAD_3EPS_INNER_TIME: f64 = 2.45e5;
pub const GRAD_3EPS_INNER_C: f64 = 180.0;
pub const GRAD_3EPS_TOWER: f64 = 7.294e7;

// |w|_n and |w|_inf growth
pub const LP_SUP_RATE: f64 = 1.1e5;

// ln n threshold
pub const THRESHOLD_SQRT_N: f64 = 2.07;
pub const THRESHOLD_SUP: f64 = 12.78;
pub const THRESHOLD_RATE: f64 = 2.2e5;

pub const TABLE: &[Constant] = &[
    Constant { name: "enstrophy_lead", value: ENSTROPHY_LEAD, anchor: ANCHOR_ENSTROPHY_INTEGRAL },
    Constant { name: "enstrophy_mid", value: ENSTROPHY_MID, anchor: ANCHOR_ENSTROPHY_INTEGRAL },
    Constant { name: "enstrophy_tail", value: ENSTROPHY_TAIL, anchor: ANCHOR_ENSTROPHY_INTEGRAL },
    Constant { name: "growth_rate", value: GROWTH_RATE, anchor: ANCHOR_L2EPS_NORM },
    Constant { name: "bracket_lead", value: BRACKET_LEAD, anchor: ANCHOR_L2EPS_NORM },
    Constant { name: "bracket_sqrt_n", value: BRACKET_SQRT_N, anchor: ANCHOR_L2EPS_NORM },
    Constant { name: "bracket_n", value: BRACKET_N, anchor: ANCHOR_L2EPS_NORM },
    Constant { name: "bracket_time", value: BRACKET_TIME, anchor: ANCHOR_L2EPS_NORM },
    Constant { name: "bracket_sqrt_n_time", value: BRACKET_SQRT_N_TIME, anchor: ANCHOR_WEIGHTED_GRAD },
    Constant { name: "bracket_power", value: BRACKET_POWER, anchor: ANCHOR_WEIGHTED_GRAD },
    Constant { name: "weighted_prefactor", value: WEIGHTED_PREFACTOR, anchor: ANCHOR_WEIGHTED_GRAD },
    Constant { name: "printed_nu_power", value: PRINTED_NU_POWER, anchor: ANCHOR_GRAD_L2 },
    Constant { name: "printed_n_power", value: PRINTED_N_POWER, anchor: ANCHOR_GRAD_L2 },
    Constant { name: "grad_l2_time", value: GRAD_L2_TIME, anchor: ANCHOR_GRAD_L2 },
    Constant { name: "grad_l2_c", value: GRAD_L2_C, anchor: ANCHOR_GRAD_L2 },
    Constant { name: "grad_l2_tower", value: GRAD_L2_TOWER, anchor: ANCHOR_GRAD_L2 },
    Constant { name: "second_grad_prefactor", value: SECOND_GRAD_PREFACTOR, anchor: ANCHOR_SECOND_GRAD },
    Constant { name: "second_grad_time", value: SECOND_GRAD_TIME, anchor: ANCHOR_SECOND_GRAD },
    Constant { name: "second_grad_c", value: SECOND_GRAD_C, anchor: ANCHOR_SECOND_GRAD },
    Constant { name: "second_grad_tower", value: SECOND_GRAD_TOWER, anchor: ANCHOR_SECOND_GRAD },
    Constant { name: "grad_3eps_c", value: GRAD_3EPS_C, anchor: ANCHOR_GRAD_3EPS },
    Constant { name: "grad_3eps_time", value: GRAD_3EPS_TIME, anchor: ANCHOR_GRAD_3EPS },
    Constant { name: "grad_3eps_mid", value: GRAD_3EPS_MID, anchor: ANCHOR_GRAD_3EPS },
    Constant { name: "grad_3eps_inner_time", value: GRAD_3EPS_INNER_TIME, anchor: ANCHOR_GRAD_3EPS },
    Constant { name: "grad_3eps_inner_c", value: GRAD_3EPS_INNER_C, anchor: ANCHOR_GRAD_3EPS },
    Constant { name: "grad_3eps_tower", value: GRAD_3EPS_TOWER, anchor: ANCHOR_GRAD_3EPS },
    Constant { name: "printed_inner_norm_power", value: PRINTED_INNER_NORM_POWER, anchor: ANCHOR_GRAD_3EPS },
    Constant { name: "lp_sup_rate", value: LP_SUP_RATE, anchor: ANCHOR_LP_SUP_GROWTH },
    Constant { name: "threshold_sqrt_n", value: THRESHOLD_SQRT_N, anchor: ANCHOR_N_THRESHOLD },
    Constant { name: "threshold_sup", value: THRESHOLD_SUP, anchor: ANCHOR_N_THRESHOLD },
    Constant { name: "threshold_rate", value: THRESHOLD_RATE, anchor: ANCHOR_N_THRESHOLD },
];

/// Anchors of the eight bound families, in report order.
pub const BOUND_ANCHORS: [&str; 8] = [
    ANCHOR_ENSTROPHY_INTEGRAL,
    ANCHOR_L2EPS_NORM,
    ANCHOR_WEIGHTED_GRAD,
    ANCHOR_GRAD_L2,
    ANCHOR_SECOND_GRAD,
    ANCHOR_GRAD_3EPS,
    ANCHOR_LP_SUP_GROWTH,
    ANCHOR_N_THRESHOLD,
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bound_anchor_is_referenced() {
        for anchor in BOUND_ANCHORS {
            assert!(TABLE.iter().any(|c| c.anchor == anchor), "{anchor}");
        }
    }

    #[test]
    fn names_are_unique() {
        for (i, a) in TABLE.iter().enumerate() {
            assert!(TABLE[i + 1..].iter().all(|b| b.name != a.name), "{}", a.name);
        }
    }
}
