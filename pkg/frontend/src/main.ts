import { FairselectClient } from "./api.js";
import { ExplorerController } from "./state.js";
import { mountExplorer } from "./ui.js";

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app container");
  const client = new FairselectClient("");
  const info = await client.dataset();
  const k = Math.min(10, info.n);
  const ideal = Math.round(k * info.protectedShare);
  const controller = new ExplorerController(client, info.d, info.n, {
    k,
    lower: Math.max(0, ideal - 1),
    upper: Math.min(k, ideal + 1),
  });
  const ui = mountExplorer(controller, { root, columnNames: info.columnNames });
  await controller.audit();
  ui.render();
}

void boot().catch((e) => {
  const root = document.getElementById("app");
  if (root) root.textContent = `failed to load dataset: ${e}`;
});
