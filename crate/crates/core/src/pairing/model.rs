use super::direction::{classify, direction};
use super::scenario::{BoundedLink, ClassOrder, Link, LinkImage, Model, Scenario};
use super::{sample_points, stream, Direction, LinkKind, PairingError, SideName};
use crate::order::{back_and_forth, preserves, CodedOrder, IsoMode, IsoVerdict, QuadRat, Verdict};

fn is_bounded_link(link: &Link) -> bool {
    match link {
        Link::Bounded(_) => true,
        Link::Unbounded(_) => false,
        Link::Explicit(e) => e.iter().all(|(_, i)| matches!(i, LinkImage::Class { .. })),
    }
}

/// Restricts both class orders to a model. Bounded links need the model to
/// be partner-closed; for unbounded links each side must be empty or dense.
pub fn restrict_to_model(scn: &Scenario, model: &Model, samples: usize, seed: u64) -> Result<Scenario, PairingError> {
    let p = model.p.clone().unwrap_or_else(|| scn.lin_p.points.clone());
    let q = model.q.clone().unwrap_or_else(|| scn.lin_q.points.clone());
    for (name, sub, full, purpose) in [("p", &p, &scn.lin_p.points, 30), ("q", &q, &scn.lin_q.points, 31)] {
        if let Some(x) = sample_points(sub, samples, &mut stream(seed, purpose)).into_iter().find(|x| !full.member(x)) {
            return Err(PairingError::InvalidModel(format!("{x} is not a class of {name}")));
        }
    }

    if is_bounded_link(&scn.link) {
        for a in sample_points(&p, samples, &mut stream(seed, 32)) {
            match scn.raw_image(&a)? {
                LinkImage::Class { point } if q.member(&point) => {}
                _ => return Err(PairingError::ModelNotClosed { side: SideName::P, class: a }),
            }
        }
        for b in sample_points(&q, samples, &mut stream(seed, 33)) {
            match scn.inverse(&b) {
                Ok(a) if p.member(&a) => {}
                _ => return Err(PairingError::ModelNotClosed { side: SideName::Q, class: b }),
            }
        }
    } else {
        for (name, side) in [("p", &p), ("q", &q)] {
            if !side.is_empty() && (side.is_finite() || !side.is_dense()) {
                return Err(PairingError::InvalidModel(format!(
                    "{name} side of an unbounded model must be empty or a dense coded order"
                )));
            }
        }
    }

    let link = match &scn.link {
        Link::Bounded(BoundedLink::Pairs(pairs)) => {
            Link::Bounded(BoundedLink::Pairs(pairs.iter().filter(|(a, _)| p.member(a)).cloned().collect()))
        }
        Link::Explicit(entries) => Link::Explicit(entries.iter().filter(|(a, _)| p.member(a)).cloned().collect()),
        other => other.clone(),
    };
    Ok(Scenario {
        lin_p: ClassOrder { points: p, member_view: scn.lin_p.member_view },
        lin_q: ClassOrder { points: q, member_view: scn.lin_q.member_view },
        link,
        declared_commute: scn.declared_commute,
        model: None,
    })
}

/// A finite partner-closed model: `k` sampled classes of `lin_p` and their images.
pub fn partnered_model(scn: &Scenario, k: usize, seed: u64) -> Result<Model, PairingError> {
    if !is_bounded_link(&scn.link) {
        return Err(PairingError::WrongKind { expected: LinkKind::Bounded, found: LinkKind::Unbounded });
    }
    let mut rng = stream(seed, 34);
    let mut ps: Vec<QuadRat> = Vec::with_capacity(k);
    let mut tries = 0;
    while ps.len() < k && tries < 50 * k + 50 {
        tries += 1;
        if let Some(a) = sample_points(&scn.lin_p.points, 1, &mut rng).pop() {
            if !ps.contains(&a) {
                ps.push(a);
            }
        }
    }
    let mut qs = Vec::with_capacity(ps.len());
    for a in &ps {
        match scn.image(a)? {
            LinkImage::Class { point } => qs.push(point),
            _ => unreachable!("bounded link"),
        }
    }
    Ok(Model { p: Some(CodedOrder::finite(ps)), q: Some(CodedOrder::finite(qs)) })
}

/// On a (restricted) bounded scenario, `F` is an isomorphism when it is
/// increasing and an anti-isomorphism when decreasing. Verified on all
/// pairs of a finite model, on sampled pairs otherwise.
pub fn bounded_iso(scn: &Scenario, samples: usize, seed: u64) -> Result<IsoVerdict, PairingError> {
    let kind = classify(scn, samples, seed)?;
    if kind != LinkKind::Bounded {
        return Err(PairingError::WrongKind { expected: LinkKind::Bounded, found: kind });
    }
    let dir = direction(scn, samples, seed)?.direction;
    let (mode, success) = match dir {
        Direction::Increasing => (IsoMode::Iso, Verdict::Iso),
        Direction::Decreasing => (IsoMode::Anti, Verdict::AntiIso),
    };
    let mut map = Vec::new();
    for a in sample_points(&scn.lin_p.points, samples, &mut stream(seed, 35)) {
        match scn.image(&a)? {
            LinkImage::Class { point } => map.push((a, point)),
            _ => unreachable!("bounded link"),
        }
    }
    if !preserves(&map, mode) {
        return Ok(IsoVerdict {
            verdict: Verdict::NotIso,
            depth: map.len(),
            partial_map: map,
            obstruction: Some(format!("F does not {} order", if mode == IsoMode::Iso { "preserve" } else { "reverse" })),
        });
    }
    if scn.lin_p.points.is_finite() {
        let by_size = back_and_forth(&scn.lin_p.points, &scn.lin_q.points, mode, map.len(), seed);
        if by_size.verdict != success {
            return Ok(by_size);
        }
    }
    Ok(IsoVerdict { verdict: success, depth: map.len(), partial_map: map, obstruction: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::scenario::AffineMap;

    fn identity_on_rationals() -> Scenario {
        Scenario::new(
            ClassOrder::new(CodedOrder::rationals()),
            ClassOrder::new(CodedOrder::rationals()),
            Link::Bounded(BoundedLink::Rule(AffineMap::identity())),
            false,
        )
    }

    #[test]
    fn partnered_model_gives_iso() {
        let scn = identity_on_rationals();
        let m = partnered_model(&scn, 20, 1).unwrap();
        let r = restrict_to_model(&scn, &m, 500, 0).unwrap();
        let v = bounded_iso(&r, 500, 0).unwrap();
        assert_eq!(v.verdict, Verdict::Iso);
        assert_eq!(v.partial_map.len(), 20);
    }

    #[test]
    fn missing_partner_is_reported() {
        let scn = identity_on_rationals();
        let m = Model {
            p: Some(CodedOrder::finite(vec![QuadRat::int(0), QuadRat::int(1)])),
            q: Some(CodedOrder::finite(vec![QuadRat::int(0)])),
        };
        assert_eq!(
            restrict_to_model(&scn, &m, 500, 0),
            Err(PairingError::ModelNotClosed { side: SideName::P, class: QuadRat::int(1) })
        );
    }

    #[test]
    fn singleton_model_is_trivially_iso() {
        let scn = identity_on_rationals();
        let one = CodedOrder::finite(vec![QuadRat::frac(1, 2)]);
        let r = restrict_to_model(&scn, &Model { p: Some(one.clone()), q: Some(one) }, 10, 0).unwrap();
        assert_eq!(bounded_iso(&r, 10, 0).unwrap().verdict, Verdict::Iso);
    }
}
