//! New England 39-bus, 10-machine system.
//!
//! Line, transformer, load and dispatch data follow the widely distributed
//! 39-bus case (loads and dispatch in MW/MVAr on a 100 MVA base). Transient
//! reactances and inertia constants are the classical-model values for the
//! ten machines. Bus 39 is the slack bus and hosts generator 1, which is
//! modelled as an infinite bus. The dispatch at bus 31 is the solved slack
//! output of the original case so the flow solution is unchanged.

use super::network::{Branch, Bus, BusKind, Generator, NetworkModel};

const BASE_MVA: f64 = 100.0;
const FREQUENCY_HZ: f64 = 60.0;

// id, kind, v_set, Pd (MW), Qd (MVAr)
#[rustfmt::skip]
const BUSES: [(usize, BusKind, f64, f64, f64); 39] = [
    (1, BusKind::Pq, 1.0, 97.6, 44.2),
    (2, BusKind::Pq, 1.0, 0.0, 0.0),
    (3, BusKind::Pq, 1.0, 322.0, 2.4),
    (4, BusKind::Pq, 1.0, 500.0, 184.0),
    (5, BusKind::Pq, 1.0, 0.0, 0.0),
    (6, BusKind::Pq, 1.0, 0.0, 0.0),
    (7, BusKind::Pq, 1.0, 233.8, 84.0),
    (8, BusKind::Pq, 1.0, 522.0, 176.6),
    (9, BusKind::Pq, 1.0, 6.5, -66.6),
    (10, BusKind::Pq, 1.0, 0.0, 0.0),
    (11, BusKind::Pq, 1.0, 0.0, 0.0),
    (12, BusKind::Pq, 1.0, 8.53, 88.0),
    (13, BusKind::Pq, 1.0, 0.0, 0.0),
    (14, BusKind::Pq, 1.0, 0.0, 0.0),
    (15, BusKind::Pq, 1.0, 320.0, 153.0),
    (16, BusKind::Pq, 1.0, 329.0, 32.3),
    (17, BusKind::Pq, 1.0, 0.0, 0.0),
    (18, BusKind::Pq, 1.0, 158.0, 30.0),
    (19, BusKind::Pq, 1.0, 0.0, 0.0),
    (20, BusKind::Pq, 1.0, 680.0, 103.0),
    (21, BusKind::Pq, 1.0, 274.0, 115.0),
    (22, BusKind::Pq, 1.0, 0.0, 0.0),
    (23, BusKind::Pq, 1.0, 247.5, 84.6),
    (24, BusKind::Pq, 1.0, 308.6, -92.2),
    (25, BusKind::Pq, 1.0, 224.0, 47.2),
    (26, BusKind::Pq, 1.0, 139.0, 17.0),
    (27, BusKind::Pq, 1.0, 281.0, 75.5),
    (28, BusKind::Pq, 1.0, 206.0, 27.6),
    (29, BusKind::Pq, 1.0, 283.5, 26.9),
    (30, BusKind::Pv, 1.0499, 0.0, 0.0),
    (31, BusKind::Pv, 0.982, 9.2, 4.6),
    (32, BusKind::Pv, 0.9841, 0.0, 0.0),
    (33, BusKind::Pv, 0.9972, 0.0, 0.0),
    (34, BusKind::Pv, 1.0123, 0.0, 0.0),
    (35, BusKind::Pv, 1.0494, 0.0, 0.0),
    (36, BusKind::Pv, 1.0636, 0.0, 0.0),
    (37, BusKind::Pv, 1.0275, 0.0, 0.0),
    (38, BusKind::Pv, 1.0265, 0.0, 0.0),
    (39, BusKind::Slack, 1.03, 1104.0, 250.0),
];

// from, to, r, x, b, tap
#[rustfmt::skip]
const BRANCHES: [(usize, usize, f64, f64, f64, f64); 46] = [
    (1, 2, 0.0035, 0.0411, 0.6987, 1.0),
    (1, 39, 0.001, 0.025, 0.75, 1.0),
    (2, 3, 0.0013, 0.0151, 0.2572, 1.0),
    (2, 25, 0.007, 0.0086, 0.146, 1.0),
    (2, 30, 0.0, 0.0181, 0.0, 1.025),
    (3, 4, 0.0013, 0.0213, 0.2214, 1.0),
    (3, 18, 0.0011, 0.0133, 0.2138, 1.0),
    (4, 5, 0.0008, 0.0128, 0.1342, 1.0),
    (4, 14, 0.0008, 0.0129, 0.1382, 1.0),
    (5, 6, 0.0002, 0.0026, 0.0434, 1.0),
    (5, 8, 0.0008, 0.0112, 0.1476, 1.0),
    (6, 7, 0.0006, 0.0092, 0.113, 1.0),
    (6, 11, 0.0007, 0.0082, 0.1389, 1.0),
    (6, 31, 0.0, 0.025, 0.0, 1.07),
    (7, 8, 0.0004, 0.0046, 0.078, 1.0),
    (8, 9, 0.0023, 0.0363, 0.3804, 1.0),
    (9, 39, 0.001, 0.025, 1.2, 1.0),
    (10, 11, 0.0004, 0.0043, 0.0729, 1.0),
    (10, 13, 0.0004, 0.0043, 0.0729, 1.0),
    (10, 32, 0.0, 0.02, 0.0, 1.07),
    (12, 11, 0.0016, 0.0435, 0.0, 1.006),
    (12, 13, 0.0016, 0.0435, 0.0, 1.006),
    (13, 14, 0.0009, 0.0101, 0.1723, 1.0),
    (14, 15, 0.0018, 0.0217, 0.366, 1.0),
    (15, 16, 0.0009, 0.0094, 0.171, 1.0),
    (16, 17, 0.0007, 0.0089, 0.1342, 1.0),
    (16, 19, 0.0016, 0.0195, 0.304, 1.0),
    (16, 21, 0.0008, 0.0135, 0.2548, 1.0),
    (16, 24, 0.0003, 0.0059, 0.068, 1.0),
    (17, 18, 0.0007, 0.0082, 0.1319, 1.0),
    (17, 27, 0.0013, 0.0173, 0.3216, 1.0),
    (19, 20, 0.0007, 0.0138, 0.0, 1.06),
    (19, 33, 0.0007, 0.0142, 0.0, 1.07),
    (20, 34, 0.0009, 0.018, 0.0, 1.009),
    (21, 22, 0.0008, 0.014, 0.2565, 1.0),
    (22, 23, 0.0006, 0.0096, 0.1846, 1.0),
    (22, 35, 0.0, 0.0143, 0.0, 1.025),
    (23, 24, 0.0022, 0.035, 0.361, 1.0),
    (23, 36, 0.0005, 0.0272, 0.0, 1.0),
    (25, 26, 0.0032, 0.0323, 0.531, 1.0),
    (25, 37, 0.0006, 0.0232, 0.0, 1.025),
    (26, 27, 0.0014, 0.0147, 0.2396, 1.0),
    (26, 28, 0.0043, 0.0474, 0.7802, 1.0),
    (26, 29, 0.0057, 0.0625, 1.029, 1.0),
    (28, 29, 0.0014, 0.0151, 0.249, 1.0),
    (29, 38, 0.0008, 0.0156, 0.0, 1.025),
];

// generator id, bus, x'd (p.u.), H (s, on the system base), Pg (MW)
#[rustfmt::skip]
const GENERATORS: [(usize, usize, f64, f64, f64); 10] = [
    (1, 39, 0.006, 500.0, 1000.0),
    (2, 31, 0.0697, 30.3, 677.871),
    (3, 32, 0.0531, 35.8, 650.0),
    (4, 33, 0.0436, 28.6, 632.0),
    (5, 34, 0.132, 26.0, 508.0),
    (6, 35, 0.05, 34.8, 650.0),
    (7, 36, 0.049, 26.4, 560.0),
    (8, 37, 0.057, 24.3, 540.0),
    (9, 38, 0.057, 34.5, 830.0),
    (10, 30, 0.031, 42.0, 250.0),
];

pub(super) fn model() -> NetworkModel {
    let omega_s = super::synchronous_speed(FREQUENCY_HZ);
    let buses = BUSES
        .iter()
        .map(|&(id, kind, v_set, pd, qd)| Bus {
            id,
            kind,
            v_set,
            p_load: pd / BASE_MVA,
            q_load: qd / BASE_MVA,
            g_shunt: 0.0,
            b_shunt: 0.0,
        })
        .collect();
    let branches = BRANCHES
        .iter()
        .map(|&(from, to, r, x, b, tap)| Branch {
            from,
            to,
            r,
            x,
            b,
            tap,
            in_service: true,
        })
        .collect();
    let generators = GENERATORS
        .iter()
        .map(|&(id, bus, xd_prime, h, pg)| {
            let infinite_bus = id == 1;
            Generator {
                id,
                bus,
                xd_prime,
                inertia: (!infinite_bus).then(|| 2.0 * h / omega_s),
                p_gen: pg / BASE_MVA,
                infinite_bus,
            }
        })
        .collect();
    NetworkModel {
        base_mva: BASE_MVA,
        frequency_hz: FREQUENCY_HZ,
        buses,
        branches,
        generators,
    }
}
