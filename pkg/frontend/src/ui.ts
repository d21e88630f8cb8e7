// Thin DOM binding: renders a ViewModel and forwards events to the
// controller. All decision logic lives in state.ts.

import { ExplorerController, ViewModel } from "./state.js";

export interface UiOptions {
  root: HTMLElement;
  columnNames: string[];
  auditDebounceMs?: number;
}

export function mountExplorer(
  controller: ExplorerController,
  opts: UiOptions,
): { render: () => void } {
  const { root, columnNames } = opts;
  const debounceMs = opts.auditDebounceMs ?? 150;
  let debounceTimer: ReturnType<typeof setTimeout> | null = null;

  root.innerHTML = `
    <section class="weights"></section>
    <section class="bounds">
      <label>k <input type="number" id="fs-k" min="1"></label>
      <label>lower <input type="number" id="fs-lower" min="0"></label>
      <label>upper <input type="number" id="fs-upper" min="0"></label>
      <label>eps <input type="range" id="fs-eps" min="0" max="1" step="0.01"></label>
      <span id="fs-eps-value"></span>
    </section>
    <section class="status">
      <span id="fs-badge" class="badge"></span>
      <span id="fs-interval"></span>
      <span id="fs-validation"></span>
      <div id="fs-error" class="banner" hidden></div>
    </section>
    <section class="actions">
      <button id="fs-repair">find nearby fair weights</button>
      <button id="fs-cancel" hidden>cancel</button>
      <div id="fs-suggestion" hidden>
        suggestion: <code id="fs-suggestion-w"></code>
        <button id="fs-apply">apply suggestion</button>
      </div>
      <div id="fs-widen" hidden>
        no fair vector within eps; widen the eps slider and retry
      </div>
    </section>
    <table id="fs-preview"><thead>
      <tr><th>id</th><th>score</th><th>group</th></tr>
    </thead><tbody></tbody></table>
    <ol id="fs-history"></ol>
  `;

  const weightsBox = root.querySelector(".weights") as HTMLElement;
  const el = <T extends HTMLElement>(id: string) =>
    root.querySelector(`#${id}`) as T;

  function scheduleAudit(): void {
    if (debounceTimer !== null) clearTimeout(debounceTimer);
    debounceTimer = setTimeout(() => {
      void controller.audit().then(render);
    }, debounceMs);
  }

  function buildSliders(vm: ViewModel): void {
    weightsBox.innerHTML = "";
    vm.weights.forEach((w, i) => {
      const label = document.createElement("label");
      label.textContent = columnNames[i] ?? `w${i + 1}`;
      const slider = document.createElement("input");
      slider.type = "range";
      slider.min = "0";
      slider.max = "1";
      slider.step = "0.001";
      slider.value = String(w);
      slider.dataset.index = String(i);
      slider.addEventListener("input", () => {
        controller.setWeight(i, Number(slider.value));
        render();
        scheduleAudit();
      });
      const value = document.createElement("span");
      value.className = "weight-value";
      value.textContent = w.toFixed(3);
      label.append(slider, value);
      weightsBox.append(label);
    });
  }

  function render(): void {
    const vm = controller.view();
    if (weightsBox.childElementCount !== vm.weights.length) {
      buildSliders(vm);
    } else {
      vm.weights.forEach((w, i) => {
        const label = weightsBox.children[i] as HTMLElement;
        (label.querySelector("input") as HTMLInputElement).value = String(w);
        (label.querySelector(".weight-value") as HTMLElement).textContent = w.toFixed(3);
      });
    }
    el<HTMLInputElement>("fs-k").value = String(vm.k);
    el<HTMLInputElement>("fs-lower").value = String(vm.lower);
    el<HTMLInputElement>("fs-upper").value = String(vm.upper);
    el<HTMLInputElement>("fs-eps").value = String(vm.eps);
    el("fs-eps-value").textContent = vm.eps.toFixed(2);

    const badge = el("fs-badge");
    badge.textContent = vm.badge;
    badge.className = `badge badge-${vm.badge}`;
    el("fs-interval").textContent = vm.interval
      ? `protected count in [${vm.interval[0]}, ${vm.interval[1]}] vs bounds [${vm.lower}, ${vm.upper}]`
      : "";
    el("fs-validation").textContent = vm.validationMessage ?? "";
    const errorBox = el("fs-error");
    errorBox.hidden = vm.error === null;
    errorBox.textContent = vm.error ?? "";

    (el("fs-repair") as HTMLButtonElement).disabled = !vm.repairEnabled;
    el("fs-cancel").hidden = !vm.repairBusy;
    el("fs-suggestion").hidden = vm.suggestion === null;
    if (vm.suggestion) {
      el("fs-suggestion-w").textContent = vm.suggestion
        .map((x) => x.toFixed(3))
        .join(", ");
    }
    el("fs-widen").hidden = !vm.widenEpsPrompt;

    const tbody = root.querySelector("#fs-preview tbody") as HTMLElement;
    tbody.innerHTML = vm.preview
      .map(
        (row) =>
          `<tr><td>${row.id}</td><td>${row.score.toFixed(4)}</td><td>${row.group}</td></tr>`,
      )
      .join("");

    const history = el("fs-history");
    history.innerHTML = "";
    vm.history.forEach((h, i) => {
      const item = document.createElement("li");
      item.textContent = `${h.verdict}: ${h.weights.map((x) => x.toFixed(3)).join(", ")} `;
      const btn = document.createElement("button");
      btn.textContent = "revert";
      btn.addEventListener("click", () => {
        controller.revert(i);
        render();
        scheduleAudit();
      });
      item.append(btn);
      history.append(item);
    });
  }

  el("fs-k").addEventListener("change", () => {
    controller.setBounds(
      Number(el<HTMLInputElement>("fs-k").value),
      Number(el<HTMLInputElement>("fs-lower").value),
      Number(el<HTMLInputElement>("fs-upper").value),
    );
    scheduleAudit();
  });
  el("fs-lower").addEventListener("change", () => el("fs-k").dispatchEvent(new Event("change")));
  el("fs-upper").addEventListener("change", () => el("fs-k").dispatchEvent(new Event("change")));
  el("fs-eps").addEventListener("input", () => {
    controller.setEps(Number(el<HTMLInputElement>("fs-eps").value));
    render();
  });
  el("fs-repair").addEventListener("click", () => {
    void controller.repair().then(render);
    render();
  });
  el("fs-cancel").addEventListener("click", () => {
    controller.cancelRepair();
    render();
  });
  el("fs-apply").addEventListener("click", () => {
    void controller.applySuggestion().then(render);
  });

  render();
  return { render };
}
