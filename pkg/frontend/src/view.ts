// DOM rendering: one render pass per state change, no framework. The view
// only displays engine state; all decisions live on the server.

import type { WizardEngine, WizardState } from './engine';
import { formatExpr, formatRational } from './rational';
import type { ConstraintJson, ExprJson, Rational, VariableJson } from './types';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function button(label: string, onClick: () => void, disabled = false): HTMLButtonElement {
  const b = el('button', undefined, label);
  b.disabled = disabled;
  b.addEventListener('click', onClick);
  return b;
}

function describeBounds(variable: VariableJson): string {
  const lo = variable.lower === null ? '-inf' : formatRational(variable.lower);
  const hi = variable.upper === null ? '+inf' : formatRational(variable.upper);
  return `[${lo}, ${hi}]`;
}

function describeConstraint(constraint: ConstraintJson): string {
  const family = constraint.family.replace(/_/g, ' ');
  return constraint.label ? `${family} — ${constraint.label}` : family;
}

function renderBanner(state: WizardState): HTMLElement | null {
  if (!state.banner) return null;
  const banner = el('div', 'banner error');
  banner.appendChild(el('strong', undefined, state.banner.code));
  banner.appendChild(el('span', undefined, ` ${state.banner.message}`));
  if (state.banner.subject) {
    banner.appendChild(el('span', 'subject', ` (${state.banner.subject})`));
  }
  return banner;
}

function renderVariables(state: WizardState, engine: WizardEngine): HTMLElement {
  const panel = el('section', 'panel');
  panel.appendChild(el('h2', undefined, 'Variables'));
  const list = el('ul', 'variables');
  for (const variable of state.model?.variables ?? []) {
    list.appendChild(el('li', undefined, `${variable.name} : ${variable.kind} ${describeBounds(variable)}`));
  }
  panel.appendChild(list);

  const form = el('div', 'row');
  const name = el('input');
  name.placeholder = 'name';
  const kind = el('select');
  for (const option of ['binary', 'integer', 'continuous']) {
    const o = el('option', undefined, option);
    o.value = option;
    kind.appendChild(o);
  }
  const lower = el('input');
  lower.placeholder = 'lower (opt.)';
  const upper = el('input');
  upper.placeholder = 'upper (opt.)';
  form.append(
    name, kind, lower, upper,
    button('declare', () => {
      void engine.declareVariable(name.value, kind.value, lower.value, upper.value);
    }, state.busy),
  );
  panel.appendChild(form);
  return panel;
}

function renderObjective(state: WizardState, engine: WizardEngine): HTMLElement {
  const panel = el('section', 'panel');
  panel.appendChild(el('h2', undefined, 'Objective'));
  const objective = state.model?.objective ?? null;
  panel.appendChild(el('p', 'current',
    objective ? `${objective.direction} ${formatExpr(objective.expr)}` : 'none yet'));
  const row = el('div', 'row');
  const direction = el('select');
  for (const option of ['max', 'min']) {
    const o = el('option', undefined, option);
    o.value = option;
    direction.appendChild(o);
  }
  const expr = el('input');
  expr.placeholder = 'e.g. 3 x1 + 4 x2';
  row.append(
    direction, expr,
    button('set objective', () => {
      void engine.setObjective(direction.value as 'min' | 'max', expr.value);
    }, state.busy),
  );
  panel.appendChild(row);
  return panel;
}

function renderModel(state: WizardState): HTMLElement {
  const panel = el('section', 'panel');
  panel.appendChild(el('h2', undefined, 'Model'));
  const list = el('ul', 'constraints');
  for (const constraint of state.model?.constraints ?? []) {
    const item = el('li');
    if (constraint.omt_node !== null) {
      item.appendChild(el('span', 'badge', `node ${constraint.omt_node}`));
    }
    item.appendChild(el('span', undefined, ` ${describeConstraint(constraint)}`));
    list.appendChild(item);
  }
  if ((state.model?.constraints ?? []).length === 0) {
    list.appendChild(el('li', 'empty', 'no constraints yet — answer the questions on the right'));
  }
  panel.appendChild(list);
  return panel;
}

function renderQuestion(state: WizardState, engine: WizardEngine): HTMLElement {
  const card = el('section', 'panel question');
  card.appendChild(el('h2', undefined, 'Describe the requirement'));
  card.appendChild(el('p', 'question-text', state.question ?? ''));
  const answers = el('div', 'answers');
  for (const answer of state.answers) {
    answers.appendChild(button(answer, () => void engine.answer(answer), state.busy));
  }
  card.appendChild(answers);
  return card;
}

function renderTemplate(state: WizardState, engine: WizardEngine): HTMLElement {
  const card = el('section', 'panel template');
  const template = state.template!;
  const node = state.tree?.nodes.find((n) => n.id === state.cursor);
  card.appendChild(el('h2', undefined, `Fill in: ${node?.label ?? template.family} (node ${state.cursor})`));
  const form = el('div', 'slots');
  for (const slot of template.slots) {
    const rowEl = el('label', 'slot');
    rowEl.appendChild(el('span', 'slot-name', `${slot.name} (${slot.kind})`));
    const input = el('input');
    input.value = state.drafts[slot.name]?.value ?? '';
    input.addEventListener('input', () => engine.setSlotDraft(slot.name, input.value));
    rowEl.appendChild(input);
    const error = state.drafts[slot.name]?.error;
    if (error) {
      rowEl.appendChild(el('span', 'field-error', error));
    }
    form.appendChild(rowEl);
  }
  const labelRow = el('label', 'slot');
  labelRow.appendChild(el('span', 'slot-name', 'label (optional)'));
  const labelInput = el('input');
  labelInput.value = state.labelDraft;
  labelInput.addEventListener('input', () => engine.setLabelDraft(labelInput.value));
  labelRow.appendChild(labelInput);
  form.appendChild(labelRow);
  card.appendChild(form);
  card.appendChild(button('attach constraint', () => void engine.submitTemplate(), state.busy));
  return card;
}

function valueText(value: Rational | null): string {
  return value === null ? '—' : formatRational(value);
}

function renderActions(state: WizardState, engine: WizardEngine): HTMLElement {
  const panel = el('section', 'panel actions');
  panel.appendChild(el('h2', undefined, 'Run'));
  const ready = engine.canRunActions();
  const row = el('div', 'row');
  row.append(
    button('solve', () => void engine.solve(), state.busy || !ready),
    button('check', () => void engine.check(), state.busy || !ready),
    button('compile LP', () => void engine.compile('lp'), state.busy || !ready),
    button('compile MPS', () => void engine.compile('mps'), state.busy || !ready),
  );
  panel.appendChild(row);
  if (!ready) {
    panel.appendChild(el('p', 'hint', 'declare variables and attach a constraint to enable these'));
  } else if (state.hint) {
    panel.appendChild(el('p', 'hint', state.hint));
  }

  if (state.lastSolve) {
    const solve = el('div', 'result');
    solve.appendChild(el('h3', undefined, `solve: ${state.lastSolve.status}`));
    if (state.lastSolve.status === 'optimal') {
      solve.appendChild(el('p', undefined, `value ${valueText(state.lastSolve.value)}`));
      const witness = el('ul', 'witness');
      for (const [name, value] of Object.entries(state.lastSolve.witness ?? {})) {
        if (value.num !== 0) witness.appendChild(el('li', undefined, `${name} = ${formatRational(value)}`));
      }
      solve.appendChild(witness);
    }
    solve.appendChild(el('p', 'fine', `${state.lastSolve.points_enumerated} points enumerated`));
    panel.appendChild(solve);
  }

  if (state.lastCheck) {
    const check = el('div', 'result');
    check.appendChild(el('h3', undefined, `check: ${state.lastCheck.ok ? 'equivalent' : 'MISMATCHES'}`));
    const table = el('table', 'mismatches');
    const head = el('tr');
    ['constraint', 'points', 'mismatches'].forEach((h) => head.appendChild(el('th', undefined, h)));
    table.appendChild(head);
    for (const entry of state.lastCheck.constraints) {
      const tr = el('tr');
      tr.appendChild(el('td', undefined, entry.id));
      tr.appendChild(el('td', undefined, String(entry.points_checked)));
      tr.appendChild(el('td', undefined, String(entry.mismatches.length)));
      table.appendChild(tr);
    }
    check.appendChild(table);
    panel.appendChild(check);
  }

  if (state.lastCompile) {
    const compile = el('div', 'result');
    compile.appendChild(el('h3', undefined, `compiled ${state.lastCompile.format.toUpperCase()}`));
    const download = el('a', 'download', `download model.${state.lastCompile.format}`);
    download.href = URL.createObjectURL(
      new Blob([state.lastCompile.text], { type: 'text/plain' }),
    );
    download.setAttribute('download', `model.${state.lastCompile.format}`);
    compile.appendChild(download);
    const pre = el('pre', 'listing', state.lastCompile.text);
    compile.appendChild(pre);
    panel.appendChild(compile);
  }
  return panel;
}

export function render(root: HTMLElement, engine: WizardEngine): void {
  const state = engine.getState();
  root.innerHTML = '';
  const header = el('header');
  header.appendChild(el('h1', undefined, 'Model elicitation wizard'));
  header.appendChild(el('p', 'session',
    state.sessionId ? `session ${state.sessionId.slice(0, 8)}` : 'connecting…'));
  root.appendChild(header);

  if (state.phase === 'failed') {
    root.appendChild(el('p', 'fatal', 'cannot reach the service — start it with: typedmilp serve'));
    const banner = renderBanner(state);
    if (banner) root.appendChild(banner);
    return;
  }

  const banner = renderBanner(state);
  if (banner) root.appendChild(banner);

  const columns = el('div', 'columns');
  const left = el('div', 'column');
  left.appendChild(renderVariables(state, engine));
  left.appendChild(renderObjective(state, engine));
  left.appendChild(renderModel(state));
  const right = el('div', 'column');
  right.appendChild(state.nodeKind === 'leaf' ? renderTemplate(state, engine) : renderQuestion(state, engine));
  right.appendChild(renderActions(state, engine));
  columns.append(left, right);
  root.appendChild(columns);
}
