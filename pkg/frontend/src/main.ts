import { ApiClient } from "./api";
import {
  BUDGET,
  emptyDraft,
  remainingPoints,
  toProblem,
  validateDraft,
  type BidDraft,
} from "./bidEntry";
import {
  buildCards,
  egalitarianOverlay,
  exportSelection,
  type Card,
} from "./divisionBrowser";
import { formatSig4 } from "./rational";
import { applyEdit, banner, diffDivisions } from "./whatIf";
import type { Problem, SolveCompetitive } from "./types";

// Plain-DOM wiring; all logic lives in the modules above and every number on
// screen comes straight out of an API response.

const api = new ApiClient("");

const state: {
  draft: BidDraft;
  problem: Problem | null;
  solved: SolveCompetitive | null;
  cards: Card[];
  selected: number | null;
} = {
  draft: emptyDraft("goods", ["agent1", "agent2"], ["a", "b"]),
  problem: null,
  solved: null,
  cards: [],
  selected: null,
};

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

export function renderGrid(): string {
  const { draft } = state;
  const head = ["", ...draft.items, "remaining"]
    .map((h) => `<th>${h}</th>`)
    .join("");
  const rows = draft.agents
    .map((agent, i) => {
      const cells = draft.items
        .map(
          (_, a) =>
            `<td><input type="number" min="0" data-agent="${i}" data-item="${a}"` +
            ` value="${state.draft.points[i]![a]}"/></td>`
        )
        .join("");
      const rem = remainingPoints(draft, i);
      return `<tr><th>${agent}</th>${cells}<td class="rem${rem === 0 ? "" : " off"}">${rem}</td></tr>`;
    })
    .join("");
  return `<table><tr>${head}</tr>${rows}</table>`;
}

export function renderCard(card: Card, agents: string[]): string {
  const price = card.division.price
    .map((p) => `<span class="price" title="${p}">${formatSig4(p)}</span>`)
    .join(" ");
  const grid = card.division.allocation
    .map(
      (row) =>
        "<tr>" +
        row
          .map(
            (v) =>
              `<td class="heat" style="opacity:${0.15 + 0.85 * Number(formatSig4(v))}"` +
              ` title="${v}">${formatSig4(v)}</td>`
          )
          .join("") +
        "</tr>"
    )
    .join("");
  const bars = card.bars
    .map(
      (b, i) =>
        `<div class="bar"><span style="width:${(100 * b).toFixed(1)}%"></span>${agents[i]}</div>`
    )
    .join("");
  const badges = card.badges
    .map(
      (b) =>
        `<span class="badge ${b.kind}">${agents[b.agent]}: ` +
        `${b.kind === "fair-share-exact" ? "exactly at" : "above"} fair share</span>`
    )
    .join(" ");
  const envy = card.envyFree ? '<span class="badge ok">envy-free</span>' : "";
  return (
    `<div class="card" data-card="${card.index}">` +
    `<div>prices: ${price}</div><table>${grid}</table>${bars}` +
    `<div>${badges} ${envy}</div>` +
    `<button data-select="${card.index}">pick this division</button></div>`
  );
}

async function solveCurrent(): Promise<void> {
  const errors = validateDraft(state.draft);
  el("errors").textContent = errors.map((e) => e.message).join("; ");
  if (errors.length) return;
  state.problem = toProblem(state.draft);
  const solved = await api.solve(state.problem, { enumerate: true });
  if (!solved) return; // stale
  state.solved = solved;
  const axioms = [];
  for (const d of solved.divisions) {
    const rep = await api.axioms(state.problem, d.allocation);
    if (rep) axioms.push(rep);
  }
  state.cards = buildCards(solved, axioms);
  el("cards").innerHTML = state.cards
    .map((c) => renderCard(c, state.problem!.agents))
    .join("");
  const eg = await api.solveEgalitarian(state.problem);
  if (eg) {
    const overlay = egalitarianOverlay(eg);
    el("overlay").textContent =
      "egalitarian: " + overlay.profile.map(formatSig4).join("  ");
  }
}

async function whatIf(agent: number, item: number, value: string): Promise<void> {
  if (!state.problem || !state.solved) return;
  const edited = applyEdit(state.problem, agent, item, value);
  const after = await api.solve(edited, { enumerate: true });
  if (!after) return;
  el("whatif").textContent = banner(diffDivisions(state.solved, after));
}

export function boot(): void {
  el("grid").innerHTML = renderGrid();
  el("grid").addEventListener("change", (ev) => {
    const input = ev.target as HTMLInputElement;
    const i = Number(input.dataset["agent"]);
    const a = Number(input.dataset["item"]);
    state.draft.points[i]![a] = Number(input.value);
    el("grid").innerHTML = renderGrid();
  });
  el("solve").addEventListener("click", () => void solveCurrent());
  el("cards").addEventListener("click", (ev) => {
    const btn = ev.target as HTMLElement;
    const pick = btn.dataset["select"];
    if (pick !== undefined && state.problem) {
      state.selected = Number(pick);
      const card = state.cards.find((c) => c.index === state.selected)!;
      el("selection").textContent = exportSelection(state.problem, card);
    }
  });
  el("whatif-run").addEventListener("click", () => {
    const agent = Number((el("wi-agent") as HTMLInputElement).value);
    const item = Number((el("wi-item") as HTMLInputElement).value);
    const value = (el("wi-value") as HTMLInputElement).value;
    void whatIf(agent, item, value);
  });
  el("budget").textContent = String(BUDGET);
}

if (typeof document !== "undefined" && document.getElementById("grid")) {
  boot();
}
