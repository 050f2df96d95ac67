//! Real gamma function and the helpers needed by the Bessel series.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Taylor coefficients of 1/Gamma(z) about z = 0; entry `i` multiplies z^(i+1).
const RGAMMA_TAYLOR: [f64; 29] = [
    1.0,
    0.577_215_664_901_532_860_61,
    -0.655_878_071_520_253_881_08,
    -0.042_002_635_034_095_235_529,
    0.166_538_611_382_291_489_5,
    -0.042_197_734_555_544_336_748,
    -0.009_621_971_527_876_973_562_1,
    0.007_218_943_246_663_099_542_4,
    -0.001_165_167_591_859_065_112_1,
    -0.000_215_241_674_114_950_972_82,
    0.000_128_050_282_388_116_186_15,
    -0.000_020_134_854_780_788_238_656,
    -1.250_493_482_142_670_657_3e-6,
    1.133_027_231_981_695_882_4e-6,
    -2.056_338_416_977_607_103_5e-7,
    6.116_095_104_481_415_817_9e-9,
    5.002_007_644_469_222_930_1e-9,
    -1.181_274_570_487_020_144_6e-9,
    1.043_426_711_691_100_510_5e-10,
    7.782_263_439_905_071_254e-12,
    -3.696_805_618_642_205_708_2e-12,
    5.100_370_287_454_475_979e-13,
    -2.058_326_053_566_506_783_2e-14,
    -5.348_122_539_423_017_982_4e-15,
    1.226_778_628_238_260_790_2e-15,
    -1.181_259_301_697_458_769_5e-16,
    1.186_692_254_751_600_332_6e-18,
    1.412_380_655_318_031_781_6e-18,
    -2.298_745_684_435_370_206_6e-19,
];

fn lanczos_positive(x: f64) -> f64 {
    // valid for x >= 0.5
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

fn ln_lanczos_positive(x: f64) -> f64 {
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Gamma(x) for real x. Returns infinity at the poles.
pub fn gamma(x: f64) -> f64 {
    if x == x.floor() && x <= 0.0 {
        return f64::INFINITY;
    }
    if x < 0.5 {
        PI / (sin_pi(x) * lanczos_positive(1.0 - x))
    } else if x > 171.7 {
        f64::INFINITY
    } else {
        lanczos_positive(x)
    }
}

/// 1/Gamma(x); zero at the poles of Gamma.
pub fn rgamma(x: f64) -> f64 {
    if x == x.floor() && x <= 0.0 {
        return 0.0;
    }
    if x.abs() <= 0.5 {
        // 1/Gamma(x) = sum c_k x^k, accurate near the origin where Lanczos loses digits
        let mut acc = 0.0;
        for c in RGAMMA_TAYLOR.iter().rev() {
            acc = acc * x + c;
        }
        return acc * x;
    }
    if x < 0.5 {
        sin_pi(x) * lanczos_positive(1.0 - x) / PI
    } else if x > 171.0 {
        (-ln_lanczos_positive(x)).exp()
    } else {
        1.0 / lanczos_positive(x)
    }
}

/// ln|Gamma(x)|.
pub fn ln_gamma_abs(x: f64) -> f64 {
    if x < 0.5 {
        (PI / sin_pi(x).abs()).ln() - ln_lanczos_positive(1.0 - x)
    } else {
        ln_lanczos_positive(x)
    }
}

/// sin(pi x) with exact zeros at the integers and exact +-1 at half-integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x % 2.0;
    if r == r.trunc() {
        return 0.0;
    }
    if (2.0 * r) == (2.0 * r).trunc() {
        let half = (2.0 * r) as i64;
        return match half.rem_euclid(4) {
            1 => 1.0,
            3 => -1.0,
            _ => 0.0,
        };
    }
    (PI * r).sin()
}

/// cos(pi x) with exact zeros at half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

/// Temme's auxiliary quantities for |mu| <= 1/2:
/// (gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu)).
pub(crate) fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let mu2 = mu * mu;
    // 1/Gamma(1+x) = sum_{k>=0} c_{k+1} x^k with c indexed as RGAMMA_TAYLOR
    let mut even = 0.0; // c1 + c3 mu^2 + ...
    let mut odd = 0.0; // c2 + c4 mu^2 + ...
    let n = RGAMMA_TAYLOR.len();
    let mut i = if n.is_multiple_of(2) { n - 2 } else { n - 1 };
    loop {
        even = even * mu2 + RGAMMA_TAYLOR[i];
        if i < 2 {
            break;
        }
        i -= 2;
    }
    let mut i = if n.is_multiple_of(2) { n - 1 } else { n - 2 };
    loop {
        odd = odd * mu2 + RGAMMA_TAYLOR[i];
        if i < 2 {
            break;
        }
        i -= 2;
    }
    let gam1 = -odd;
    let gam2 = even;
    let gampl = even + mu * odd;
    let gammi = even - mu * odd;
    (gam1, gam2, gampl, gammi)
}
