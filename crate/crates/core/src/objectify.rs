//! Object encapsulation: detecting arcs that let a part interact with the
//! outside directly, and rewriting them so the whole mediates.

use std::collections::HashMap;

use crate::diagnostic::{Code, Diagnostic, Subject};
use crate::model::{
    Action, Arc, ArcId, ArcKind, Kind, ModelError, RegionElement, StageRef, StaticModel, ThimacId,
};

/// Direction in which a violating arc crosses the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Crossing {
    /// Source strictly inside a part, destination outside the subtree.
    Outbound,
    /// Source outside the subtree, destination strictly inside a part.
    Inbound,
}

/// Classifies `arc` against the boundary of `whole`. Endpoints on the whole's
/// own stages are its interface and never cross.
pub fn crossing(model: &StaticModel, whole: ThimacId, arc: &Arc) -> Option<Crossing> {
    let inside = |s: StageRef| model.is_proper_descendant(s.thimac, whole);
    let outside = |s: StageRef| !model.in_subtree(s.thimac, whole);
    if inside(arc.src) && outside(arc.dst) {
        Some(Crossing::Outbound)
    } else if outside(arc.src) && inside(arc.dst) {
        Some(Crossing::Inbound)
    } else {
        None
    }
}

/// One diagnostic per arc that would break encapsulation if `thimac` were an
/// object, in arc declaration order.
pub fn object_violations(
    model: &StaticModel,
    thimac: ThimacId,
) -> Result<Vec<Diagnostic>, ModelError> {
    model.get_thimac(thimac)?;
    Ok(model
        .arcs()
        .iter()
        .filter_map(|arc| {
            crossing(model, thimac, arc).map(|c| violation(model, thimac, arc, c))
        })
        .collect())
}

pub(crate) fn violation(
    model: &StaticModel,
    whole: ThimacId,
    arc: &Arc,
    crossing: Crossing,
) -> Diagnostic {
    let direction = match crossing {
        Crossing::Outbound => "leaves",
        Crossing::Inbound => "enters",
    };
    Diagnostic::error(
        Code::Encapsulation,
        format!(
            "`{}` {direction} object `{}` through a part instead of the whole",
            model.arc_label(arc.id),
            model.thimac_path(whole)
        ),
    )
    .with_subject(Subject::Arc(arc.id))
}

struct ArcList {
    arcs: Vec<(ArcKind, StageRef, StageRef)>,
}

impl ArcList {
    /// Index of the arc, appending it if it is not already present.
    fn add(&mut self, kind: ArcKind, src: StageRef, dst: StageRef) -> usize {
        match self
            .arcs
            .iter()
            .position(|&(k, s, d)| k == kind && s == src && d == dst)
        {
            Some(i) => i,
            None => {
                self.arcs.push((kind, src, dst));
                self.arcs.len() - 1
            }
        }
    }
}

/// Marks `thimac` as an object and routes every boundary-crossing arc through
/// the whole:
///
/// * outbound `s -> t` becomes `s -> whole.release -> whole.transfer -> t`
/// * inbound `s -> t` becomes `s -> whole.transfer -> whole.receive ->
///   whole.process ~> t`
///
/// The hop touching the external stage keeps the original arc kind. Missing
/// stages on the whole are declared. Non-crossing arcs keep their relative
/// order; new arcs are appended. Event regions that referred to a removed arc
/// are re-anchored on the hop that touches the external stage.
pub fn objectify(model: &StaticModel, thimac: ThimacId) -> Result<StaticModel, ModelError> {
    model.get_thimac(thimac)?;
    let stage = |action| StageRef::new(thimac, action);

    let crossings: Vec<(ArcId, Crossing)> = model
        .arcs()
        .iter()
        .filter_map(|a| crossing(model, thimac, a).map(|c| (a.id, c)))
        .collect();

    let mut out = model.clone();
    out.thimacs[thimac.0].kind = Kind::Object;

    let mut list = ArcList {
        arcs: model
            .arcs()
            .iter()
            .filter(|a| !crossings.iter().any(|(id, _)| *id == a.id))
            .map(|a| (a.kind, a.src, a.dst))
            .collect(),
    };
    let mut remap: HashMap<ArcId, usize> = HashMap::new();
    let mut kept = 0;
    for a in model.arcs() {
        if !crossings.iter().any(|(id, _)| *id == a.id) {
            remap.insert(a.id, kept);
            kept += 1;
        }
    }

    let mut needed: Vec<Action> = Vec::new();
    for &(id, c) in &crossings {
        let arc = model.arc(id);
        let anchor = match c {
            Crossing::Outbound => {
                needed.extend([Action::Release, Action::Transfer]);
                list.add(ArcKind::Flow, arc.src, stage(Action::Release));
                list.add(ArcKind::Flow, stage(Action::Release), stage(Action::Transfer));
                list.add(arc.kind, stage(Action::Transfer), arc.dst)
            }
            Crossing::Inbound => {
                needed.extend([Action::Transfer, Action::Receive, Action::Process]);
                let anchor = list.add(arc.kind, arc.src, stage(Action::Transfer));
                list.add(ArcKind::Flow, stage(Action::Transfer), stage(Action::Receive));
                list.add(ArcKind::Flow, stage(Action::Receive), stage(Action::Process));
                list.add(ArcKind::Trigger, stage(Action::Process), arc.dst);
                anchor
            }
        };
        remap.insert(id, anchor);
    }

    let declared = &mut out.thimacs[thimac.0].stages;
    for action in needed {
        if !declared.contains(&action) {
            declared.push(action);
        }
    }

    out.arcs = list
        .arcs
        .into_iter()
        .enumerate()
        .map(|(i, (kind, src, dst))| Arc {
            id: ArcId(i),
            kind,
            src,
            dst,
        })
        .collect();

    for event in &mut out.events {
        let mut region = Vec::with_capacity(event.region.len());
        for element in &event.region {
            let element = match *element {
                RegionElement::Arc(id) => RegionElement::Arc(ArcId(remap[&id])),
                stage => stage,
            };
            if !region.contains(&element) {
                region.push(element);
            }
        }
        event.region = region;
    }
    Ok(out)
}
