//! One function per command; each builds a [`Report`] from the scenario.

use permit_games::game::coalitions_lex;
use permit_games::mechanism::{comparison_count, dominance_check, equilibrium_check, Deviation, MechanismConfig};
use permit_games::partition::{build_game_with_limit, partition_shares, Sense as Side};
use permit_games::rational::{format_decimal, parse_rational, sum};
use permit_games::stability::{
    core_nonempty, in_core, owen_allocation, stable_pipeline_for, trade_ledger, CoreVerdict, Membership, Regime,
};
use permit_games::{CharacteristicGame, Coalition, Error, LppSituation, PartitionFunctionGame, Rational, Rule};

use crate::report::{both, compact, vector, Cell, Report, Section};
use crate::scenario::parse_list;
use crate::{CliError, Command, Context, GameKind, Outcome};

pub fn run(command: &Command, ctx: &Context) -> Result<Outcome, CliError> {
    match command {
        Command::Demands => demands(ctx),
        Command::Game => game(ctx),
        Command::Cores { game, check } => cores(ctx, *game, check.as_deref()),
        Command::ResourceGames => resource_games(ctx),
        Command::Pipeline => pipeline(ctx),
        Command::Mechanism { profile } => mechanism(ctx, profile.as_deref()),
        Command::Trade { holdings, target, price } => {
            trade(ctx, holdings.as_deref(), target.as_deref(), price.as_deref())
        }
        Command::ReproducePaper => crate::reproduce::run(),
    }
}

fn sit(ctx: &Context) -> &LppSituation {
    &ctx.scenario.situation
}

fn build(ctx: &Context) -> Result<PartitionFunctionGame, CliError> {
    Ok(build_game_with_limit(sit(ctx), ctx.rule, ctx.partition_limit)?)
}

fn header(ctx: &Context, command: &str) -> Report {
    let s = sit(ctx);
    let mut report = Report::new(command);
    let mut section = Section::new("Scenario", &[]);
    section.note(format!(
        "{} firms, {} goods, {} resources; tax c = {}; cap r = {}; rule {}",
        s.n_firms(),
        s.n_goods(),
        s.n_resources(),
        both(s.tax(), ctx.precision),
        both(s.cap(), ctx.precision),
        ctx.rule
    ));
    report.push(section);
    report
}

fn individual_demands(s: &LppSituation) -> Result<Vec<Rational>, CliError> {
    Ok((0..s.n_firms()).map(|i| s.optimal_demand(Coalition::singleton(i))).collect::<Result<_, _>>()?)
}

fn demands(ctx: &Context) -> Result<Outcome, CliError> {
    let s = sit(ctx);
    let mut report = header(ctx, "demands");
    let mut section = Section::new("Optimal permit demands", &["coalition", "demand d_S", "value(S; d_S)"]);
    for c in coalitions_lex(s.n_firms()) {
        let d = s.optimal_demand(c)?;
        let v = s.coalition_value(c, &d)?;
        section.row(vec![Cell::text(c.to_string()), Cell::num(&d), Cell::num(&v)]);
    }
    let d_n = s.optimal_demand(s.grand_coalition())?;
    section.note(if &d_n > s.cap() {
        format!("grand coalition demand {} exceeds the cap", compact(&d_n, ctx.precision))
    } else {
        format!("grand coalition demand {} fits under the cap", compact(&d_n, ctx.precision))
    });
    report.push(section);
    Ok(Outcome::positive(report))
}

fn game(ctx: &Context) -> Result<Outcome, CliError> {
    let g = build(ctx)?;
    let n = g.players();
    let mut report = header(ctx, "game");
    let mut cells = Section::new(
        format!("{} partition function game", ctx.rule),
        &["partition", "block", "demand", "share f(S|P)", "value V(S|P)"],
    );
    for (k, p) in g.partitions().iter().enumerate() {
        for cell in g.cells(k) {
            cells.row(vec![
                Cell::text(format!("P{} = {p}", k + 1)),
                Cell::text(cell.block.to_string()),
                Cell::num(g.demand(cell.block)),
                Cell::num(&cell.share),
                Cell::num(&cell.value),
            ]);
        }
    }
    report.push(cells);
    let (lo, hi) = (g.pessimistic_game(), g.optimistic_game());
    let (rm, rp) = (g.resource_game(Side::Minus), g.resource_game(Side::Plus));
    let mut derived = Section::new("Derived games", &["coalition", "v-", "v+", "R-", "R+"]);
    for c in coalitions_lex(n) {
        derived.row(vec![
            Cell::text(c.to_string()),
            Cell::num(lo.value(c)),
            Cell::num(hi.value(c)),
            Cell::num(rm.value(c)),
            Cell::num(rp.value(c)),
        ]);
    }
    report.push(derived);
    Ok(Outcome::positive(report))
}

fn game_of(g: &PartitionFunctionGame, kind: GameKind) -> (CharacteristicGame, &'static str) {
    match kind {
        GameKind::Optimistic => (g.optimistic_game(), "optimistic game v+"),
        GameKind::Pessimistic => (g.pessimistic_game(), "pessimistic game v-"),
        GameKind::ResourcePlus => (g.resource_game(Side::Plus), "permit game R+"),
        GameKind::ResourceMinus => (g.resource_game(Side::Minus), "permit game R-"),
    }
}

/// The violated inequality behind an empty core, e.g. `720 + 920 + 1150 > 2300`.
pub fn cite_certificate(verdict: &CoreVerdict, game: &CharacteristicGame, precision: usize) -> Option<String> {
    let cert = verdict.certificate.as_ref()?;
    let one = Rational::from_integer(1.into());
    let terms: Vec<String> = cert
        .weights
        .iter()
        .map(|(s, w)| {
            let v = compact(game.value(*s), precision);
            if *w == one {
                v
            } else {
                format!("{}·{v}", compact(w, precision))
            }
        })
        .collect();
    Some(format!("{} > {}", terms.join(" + "), compact(&cert.grand_value, precision)))
}

fn describe_membership(m: &Membership, precision: usize) -> String {
    match m {
        Membership::Member => "in the core".into(),
        Membership::Inefficient { total, required } => format!(
            "not efficient: total {} but v(N) = {}",
            compact(total, precision),
            compact(required, precision)
        ),
        Membership::Blocked { coalition, total, value } => format!(
            "blocked by {coalition}: x(S) = {} < v(S) = {}",
            format_decimal(total, precision),
            format_decimal(value, precision)
        ),
    }
}

fn core_section(title: &str, game: &CharacteristicGame, verdict: &CoreVerdict, precision: usize) -> Section {
    let mut section = Section::new(title, &["coalition", "value"]);
    for c in coalitions_lex(game.players()) {
        section.row(vec![Cell::text(c.to_string()), Cell::num(game.value(c))]);
    }
    if verdict.nonempty {
        let w = verdict.witness.as_ref().expect("nonempty verdicts carry a witness");
        section.note(format!("core nonempty; witness {}", vector(w, precision)));
    } else {
        section.note("core empty".to_string());
        if let Some(text) = cite_certificate(verdict, game, precision) {
            let cert = verdict.certificate.as_ref().expect("cited above");
            let blocks: Vec<String> = cert.weights.iter().map(|(s, w)| format!("{s}×{}", compact(w, precision))).collect();
            section.note(format!("balanced collection {} gives {text}", blocks.join(", ")));
        }
    }
    section
}

fn cores(ctx: &Context, kind: GameKind, check: Option<&str>) -> Result<Outcome, CliError> {
    let g = build(ctx)?;
    let (game, name) = game_of(&g, kind);
    let verdict = core_nonempty(&game)?;
    let mut report = header(ctx, "cores");
    report.push(core_section(&format!("{} {name}", ctx.rule), &game, &verdict, ctx.precision));
    let mut negative = !verdict.nonempty;
    report.verdict = Some(if verdict.nonempty {
        "core nonempty".to_string()
    } else {
        match cite_certificate(&verdict, &game, ctx.precision) {
            Some(text) => format!("core empty since {text}"),
            None => "core empty".to_string(),
        }
    });
    if let Some(spec) = check {
        let x = parse_list(spec, "--check")?;
        let m = in_core(&game, &x)?;
        let mut section = Section::new("Membership", &[]);
        section.note(format!("{}: {}", vector(&x, ctx.precision), describe_membership(&m, ctx.precision)));
        report.push(section);
        negative |= !m.is_member();
    }
    Ok(Outcome { report, negative })
}

fn resource_games(ctx: &Context) -> Result<Outcome, CliError> {
    let g = build(ctx)?;
    let mut report = header(ctx, "resource-games");
    let mut negative = false;
    for (side, label) in [(Side::Plus, "R+"), (Side::Minus, "R-")] {
        let game = g.resource_game(side);
        let mut section = Section::new(
            format!("{} permit game {label}", ctx.rule),
            &["coalition", label, "value at witness", "witness partition"],
        );
        for c in coalitions_lex(g.players()) {
            let p = g.resource_witness(side, c);
            section.row(vec![
                Cell::text(c.to_string()),
                Cell::num(game.value(c)),
                Cell::num(g.value(c, p).expect("witness contains the coalition")),
                Cell::text(p.to_string()),
            ]);
        }
        let verdict = core_nonempty(&game)?;
        if verdict.nonempty {
            section.note(format!("core nonempty; witness {}", vector(verdict.witness.as_ref().unwrap(), ctx.precision)));
        } else {
            section.note(match cite_certificate(&verdict, &game, ctx.precision) {
                Some(text) => format!("core empty since {text}"),
                None => "core empty".into(),
            });
            negative |= side == Side::Minus;
        }
        report.push(section);
    }
    Ok(Outcome { report, negative })
}

fn pipeline(ctx: &Context) -> Result<Outcome, CliError> {
    let g = build(ctx)?;
    let r = stable_pipeline_for(&g)?;
    let p = ctx.precision;
    let mut report = header(ctx, "pipeline");

    let mut demands = Section::new("Demands", &["firm", "d_i"]);
    for (i, d) in r.individual_demands.iter().enumerate() {
        demands.row(vec![Cell::text((i + 1).to_string()), Cell::num(d)]);
    }
    demands.note(format!(
        "d_N = {}, sum of d_i = {}, r = {}",
        both(&r.grand_demand, p),
        both(&sum(&r.individual_demands), p),
        both(&r.cap, p)
    ));
    demands.note(match r.regime {
        Regime::Abundant => "abundant regime: d_N <= r, every coalition can be fully served".to_string(),
        Regime::ClaimsFit => "d_N > r but the individual demands fit under the cap".to_string(),
        Regime::Scarce => "scarce regime: d_N > r and the individual demands reach the cap".to_string(),
    });
    report.push(demands);

    let mut permits = Section::new(format!("Permit allocation h = {}(N, r, d)", r.rule), &["firm", "h_i"]);
    for (i, h) in r.permit_allocation.values.iter().enumerate() {
        permits.row(vec![Cell::text((i + 1).to_string()), Cell::num(h)]);
    }
    if let Some(m) = &r.permit_membership {
        permits.note(format!("h against R-: {}", describe_membership(m, p)));
    }
    report.push(permits);

    let mut merging = Section::new("Merging inequality", &["coalition", "sum of h_i", "share when merged", "holds"]);
    for line in &r.merging_checks {
        merging.row(vec![
            Cell::text(line.coalition.to_string()),
            Cell::num(&line.separate),
            Cell::num(&line.merged),
            Cell::Flag(line.holds()),
        ]);
    }
    merging.note(format!(
        "merging inequality {} for every coalition",
        if r.merging_hypothesis_holds() { "holds" } else { "fails" }
    ));
    merging.note(format!(
        "equal-awards sufficient condition (CEA, d_N > r, d_i + d_j >= 2r/n): {}",
        if r.equal_awards_condition { "met" } else { "not met" }
    ));
    report.push(merging);

    if let (Some(money), Some(dual)) = (&r.money_allocation, &r.dual) {
        let mut section = Section::new("Money allocation", &["firm", "x_i"]);
        for (i, x) in money.values.iter().enumerate() {
            section.row(vec![Cell::text((i + 1).to_string()), Cell::num(x)]);
        }
        section.note(format!("dual used y* = {}", vector(dual, p)));
        if let Some(m) = &r.money_membership {
            section.note(format!("x against v-: {}", describe_membership(m, p)));
        }
        report.push(section);
    }
    let negative = r.regime == Regime::Scarce && !r.stable();
    report.verdict = Some(match r.regime {
        Regime::Abundant => "cap does not bind; no permit rationing".to_string(),
        Regime::ClaimsFit => "individual demands fit under the cap; no bankruptcy problem to solve".to_string(),
        Regime::Scarce if r.stable() => format!(
            "stable: {} lies in the pessimistic core",
            vector(&r.money_allocation.as_ref().unwrap().values, p)
        ),
        Regime::Scarce => match &r.permit_membership {
            Some(m) if !m.is_member() => format!("unstable: the permit allocation is outside C(R-) ({})", describe_membership(m, p)),
            _ => "unstable: the money allocation is outside the pessimistic core".to_string(),
        },
    });
    Ok(Outcome { report, negative })
}

fn default_grid(s: &LppSituation, rule: Rule, demands: &[Rational]) -> Vec<Rational> {
    let mut grid: Vec<Rational> = vec![Rational::from_integer(0.into())];
    grid.extend(demands.iter().cloned());
    if sum(demands) > *s.cap() {
        grid.extend(partition_shares(rule, s.cap(), demands));
        grid.extend(partition_shares(Rule::Cea, s.cap(), demands));
    }
    grid.push(s.cap().clone());
    grid.sort();
    grid.dedup();
    grid
}

fn describe_deviation(d: &Deviation, p: usize) -> String {
    format!(
        "claimant {} reporting {} against {} earns {} instead of {}",
        d.claimant + 1,
        compact(&d.report, p),
        vector(&d.profile, p),
        format_decimal(&d.deviation_payoff, p),
        format_decimal(&d.reference_payoff, p)
    )
}

fn mechanism(ctx: &Context, profile: Option<&str>) -> Result<Outcome, CliError> {
    let s = sit(ctx);
    let p = ctx.precision;
    let demands = individual_demands(s)?;
    let grid = match &ctx.grid {
        Some(g) => g.clone(),
        None => default_grid(s, ctx.rule, &demands),
    };
    let cfg = MechanismConfig::singletons(s, ctx.rule, grid.clone())?;
    let mut report = header(ctx, "mechanism");
    let mut section = Section::new("Report grid", &["level"]);
    for level in &grid {
        section.row(vec![Cell::num(level)]);
    }
    section.note(format!("true demands {}", vector(&cfg.true_demands, p)));
    section.note(format!("{} payoff comparisons", comparison_count(&cfg)));
    report.push(section);

    let dominance = dominance_check(s, &cfg)?;
    let truthful = equilibrium_check(s, &cfg, &cfg.true_demands)?;
    let mut result = Section::new("Incentives", &[]);
    match &dominance.counterexample {
        None => result.note("truthful reporting is dominant on the grid"),
        Some(d) => result.note(format!("truthful reporting is not dominant: {}", describe_deviation(d, p))),
    };
    match &truthful.deviation {
        None => result.note("the truthful profile is an equilibrium"),
        Some(d) => result.note(format!("the truthful profile is not an equilibrium: {}", describe_deviation(d, p))),
    };
    let mut negative = !dominance.is_dominant_truthful;
    if let Some(spec) = profile {
        let reports = parse_list(spec, "--profile")?;
        let eq = equilibrium_check(s, &cfg, &reports)?;
        match &eq.deviation {
            None => result.note(format!("profile {} is an equilibrium", vector(&reports, p))),
            Some(d) => result.note(format!("profile {} is not an equilibrium: {}", vector(&reports, p), describe_deviation(d, p))),
        };
        negative |= !eq.is_equilibrium;
    }
    report.push(result);
    report.verdict = Some(if dominance.is_dominant_truthful {
        format!("{} is incentive compatible on this grid", ctx.rule)
    } else {
        format!("{} is manipulable on this grid", ctx.rule)
    });
    Ok(Outcome { report, negative })
}

fn trade(ctx: &Context, holdings: Option<&str>, target: Option<&str>, price: Option<&str>) -> Result<Outcome, CliError> {
    let s = sit(ctx);
    let p = ctx.precision;
    let h = match holdings {
        Some(spec) => parse_list(spec, "--holdings")?,
        None => partition_shares(ctx.rule, s.cap(), &individual_demands(s)?),
    };
    let target = match target {
        Some(spec) => parse_list(spec, "--target")?,
        None => owen_allocation(s, &h)?.money,
    };
    let price = match price {
        Some(text) => Some(parse_rational(text).map_err(|e| CliError::Input(format!("--price: {e}")))?),
        None => None,
    };
    let mut report = header(ctx, "trade");
    match trade_ledger(s, &h, &target, price.as_ref()) {
        Ok(ledger) => {
            let mut section = Section::new(
                "Trade ledger",
                &["firm", "initial", "holding", "sold", "revenue", "tax", "trade cash", "net"],
            );
            for (i, row) in ledger.rows.iter().enumerate() {
                section.row(vec![
                    Cell::text((i + 1).to_string()),
                    Cell::num(&row.initial),
                    Cell::num(&row.holding),
                    Cell::num(&row.sold),
                    Cell::num(&row.revenue),
                    Cell::num(&row.tax),
                    Cell::num(&row.trade_cash),
                    Cell::num(&row.net),
                ]);
            }
            match &ledger.price {
                Some(price) => section.note(format!("uniform permit price {}", both(price, p))),
                None => section.note("no permits change hands"),
            };
            if let Some(shadow) = &ledger.shadow_price {
                section.note(format!("shadow price of permits {}", both(shadow, p)));
            }
            section.note(format!("manager revenue c·r = {}", both(&ledger.manager_revenue, p)));
            report.push(section);
            report.verdict = Some(format!("target {} reached", vector(&target, p)));
            Ok(Outcome::positive(report))
        }
        Err(Error::Infeasible(why)) => {
            report.verdict = Some(format!("target {} not reachable: {why}", vector(&target, p)));
            Ok(Outcome { report, negative: true })
        }
        Err(e) => Err(e.into()),
    }
}
