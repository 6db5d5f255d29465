use std::collections::HashMap;

use super::{describe, Fault, Outcome, VerificationReport, ENUMERATION_BUDGET};
use crate::combinatorics::format_subset;
use crate::error::{Error, Result};
use crate::field::Symbol;
use crate::scheme::{deliver, place, DemandVector, Library, Randomness, SchemeParams, TapeLayout};
use crate::Rational;

type Histogram = HashMap<Vec<Symbol>, u64>;

fn pow2(bits: u64) -> u128 {
    if bits >= 127 {
        u128::MAX
    } else {
        1u128 << bits
    }
}

struct Space {
    tapes: u128,
    libraries: u128,
    demands: u128,
}

impl Space {
    fn of(params: &SchemeParams) -> Self {
        let l = params.spec().degree();
        let topo = params.topology();
        let library_bits = u64::from(l) * (topo.files() * params.sharing().file_len()) as u64;
        Self {
            tapes: pow2(TapeLayout::of(params).entropy_bits(l)),
            libraries: pow2(library_bits),
            demands: (topo.files() as u128).checked_pow(topo.users() as u32).unwrap_or(u128::MAX),
        }
    }

    fn total(&self) -> u128 {
        self.tapes.saturating_mul(self.libraries).saturating_mul(self.demands)
    }
}

/// Joint states (randomness × library × demands) an exhaustive check visits.
pub fn enumeration_size(params: &SchemeParams) -> u128 {
    Space::of(params).total()
}

fn tape(params: &SchemeParams, layout: &TapeLayout, index: u128) -> Result<Randomness> {
    let l = params.spec().degree();
    let mask = u128::from(params.spec().mask());
    let symbols: Vec<Symbol> = (0..layout.symbols()).map(|j| ((index >> (j as u32 * l)) & mask) as Symbol).collect();
    let offset = layout.symbols() as u32 * l;
    let bits: Vec<bool> = (0..layout.bits()).map(|k| (index >> (offset + k as u32)) & 1 == 1).collect();
    Randomness::from_tape(params, &symbols, &bits)
}

fn all_tapes(params: &SchemeParams, tapes: u128, fault: Fault) -> Result<Vec<Randomness>> {
    let layout = TapeLayout::of(params);
    (0..tapes)
        .map(|i| {
            let mut r = tape(params, &layout, i)?;
            fault.apply(&mut r);
            Ok(r)
        })
        .collect()
}

/// File contents for library index `index`, one base-`2^l` digit per symbol.
fn library(params: &SchemeParams, index: u128) -> Result<Library> {
    let l = params.spec().degree();
    let mask = u128::from(params.spec().mask());
    let len = params.sharing().file_len();
    let files = (0..params.topology().files())
        .map(|f| (0..len).map(|j| ((index >> ((f * len + j) as u32 * l)) & mask) as Symbol).collect())
        .collect();
    Library::new(params, files)
}

/// Everything user `g` observes: payloads, `q` vectors and its caches.
fn view(
    params: &SchemeParams,
    lib: &Library,
    randomness: &Randomness,
    demands: &DemandVector,
    g: &[usize],
) -> Result<Vec<Symbol>> {
    let placement = place(params, lib, randomness)?;
    let bc = deliver(params, randomness, &placement.shares, demands)?;
    let mut out: Vec<Symbol> = bc.payloads.concat();
    if let Some(q) = &bc.q_vectors {
        out.extend(q.iter().flatten().map(|&b| Symbol::from(b)));
    }
    for z in placement.caches_of(g) {
        for v in z.file_shares.values().chain(z.key_shares.values()) {
            out.extend_from_slice(v);
        }
    }
    Ok(out)
}

fn histogram(
    params: &SchemeParams,
    lib: &Library,
    tapes: &[Randomness],
    demands: &DemandVector,
    g: &[usize],
) -> Result<Histogram> {
    let mut h = Histogram::new();
    for r in tapes {
        *h.entry(view(params, lib, r, demands, g)?).or_default() += 1;
    }
    Ok(h)
}

/// Total variation distance between two histograms over `total` samples each.
fn distance(a: &Histogram, b: &Histogram, total: u128) -> Rational {
    let mut diff: u128 = 0;
    for (k, &x) in a {
        diff += u128::from(x.abs_diff(b.get(k).copied().unwrap_or(0)));
    }
    for (k, &y) in b {
        if !a.contains_key(k) {
            diff += u128::from(y);
        }
    }
    Rational::new(diff as i128, 2 * total as i128)
}

fn prepare(
    check: &str,
    params: &SchemeParams,
    g: &[usize],
    fault: Fault,
) -> Result<(SchemeParams, usize, VerificationReport, Space)> {
    if params.s() != 1 {
        return Err(Error::InvalidParams("exhaustive checks need s = 1".into()));
    }
    let params = fault.params(params)?;
    let gi = params.user_rank(g).ok_or_else(|| Error::InvalidParams(format!("{} is not a user", format_subset(g))))?;
    let space = Space::of(&params);
    let instance = format!("{} user={}", describe(&params, fault), format_subset(g));
    let mut report = VerificationReport::new(check, instance, space.total());
    if space.total() > ENUMERATION_BUDGET {
        report.outcome = Outcome::Refused;
    }
    Ok((params, gi, report, space))
}

/// For every demand vector and every value of the target user's file, the
/// distribution of the user's view is the same for all values of the other
/// files.
pub fn verify_secrecy_exhaustive(params: &SchemeParams, g: &[usize], fault: Fault) -> Result<VerificationReport> {
    let (params, gi, report, space) = prepare("secrecy_exhaustive", params, g, fault)?;
    if report.outcome == Outcome::Refused {
        return Ok(report);
    }
    let tapes = all_tapes(&params, space.tapes, fault)?;
    let digits_per_file = (params.spec().degree() as usize * params.sharing().file_len()) as u32;
    let per_file = 1u128 << digits_per_file;

    let mut worst = Rational::from_integer(0);
    let mut witness = None;
    for di in 0..space.demands as u64 {
        let demands = DemandVector::nth(&params, di);
        let own = demands.of(gi) - 1;
        for w in 0..per_file {
            let mut reference: Option<(u128, Histogram)> = None;
            for rest in 0..space.libraries / per_file {
                // Splice `w` into the digit block of the demanded file.
                let low = rest & ((1u128 << (own as u32 * digits_per_file)) - 1);
                let high = rest >> (own as u32 * digits_per_file);
                let index =
                    low | (w << (own as u32 * digits_per_file)) | (high << ((own as u32 + 1) * digits_per_file));
                let h = histogram(&params, &library(&params, index)?, &tapes, &demands, g)?;
                match &reference {
                    None => reference = Some((index, h)),
                    Some((ref_index, href)) => {
                        let d = distance(href, &h, space.tapes);
                        if d > worst {
                            worst = d;
                            witness = Some(format!(
                                "demands={:?} libraries {ref_index} vs {index} (file {} fixed)",
                                demands.as_slice(),
                                own + 1
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(finish(report, worst, witness))
}

/// For every library value and every demand of the observer, the
/// distribution of its view is the same for all demands of the other users.
pub fn verify_privacy_exhaustive(params: &SchemeParams, g: &[usize], fault: Fault) -> Result<VerificationReport> {
    let (params, gi, mut report, space) = prepare("privacy_exhaustive", params, g, fault)?;
    report.expected_fail = !params.variant().is_private();
    if report.outcome == Outcome::Refused {
        return Ok(report);
    }
    let tapes = all_tapes(&params, space.tapes, fault)?;
    let topo = params.topology();
    let n = topo.files();
    let others = space.demands / n as u128;

    let mut worst = Rational::from_integer(0);
    let mut witness = None;
    for li in 0..space.libraries {
        let lib = library(&params, li)?;
        for own in 1..=n {
            let mut reference: Option<(Vec<usize>, Histogram)> = None;
            for oi in 0..others {
                let mut rest = DemandVector::nth(&params, oi as u64).as_slice()[1..].to_vec();
                rest.insert(gi, own);
                let demands = DemandVector::new(&params, rest)?;
                let h = histogram(&params, &lib, &tapes, &demands, g)?;
                match &reference {
                    None => reference = Some((demands.as_slice().to_vec(), h)),
                    Some((first, href)) => {
                        let d = distance(href, &h, space.tapes);
                        if d > worst {
                            worst = d;
                            witness = Some(format!("library={li} demands {first:?} vs {:?}", demands.as_slice()));
                        }
                    }
                }
            }
        }
    }
    Ok(finish(report, worst, witness))
}

fn finish(report: VerificationReport, worst: Rational, witness: Option<String>) -> VerificationReport {
    let report = report.with_distance(worst);
    match witness {
        Some(w) if worst > Rational::from_integer(0) => report.fail(w),
        _ => report,
    }
}
