/**
 * Browser wiring: binds the editor document to the page chrome — toolbar,
 * canvas, property inspector, layout dialog, banner, and status bar.
 *
 * All behavior lives in the document and its service client; this module
 * only moves values between DOM controls and document actions, repaints on
 * every document change, and runs the 300 ms presentation tween after a
 * layout.  The layout dialog is generated from GET /algorithms, so the
 * editor can only ever request algorithms the service actually offers.
 */

import { AlgorithmInfo, ServiceClient } from "./api.js";
import { EditorDocument, LayoutRun, attachCanvasInteractions, lerpBounds, screenToWorld } from "./editor.js";
import { rect } from "./geometry.js";
import { ARROW_STYLES, LINE_STYLES, NODE_SHAPES, ArrowStyle, LineStyle, NodeShape } from "./model.js";
import { renderCanvas } from "./render.js";

const TWEEN_MS = 300;
const DEFAULT_SERVICE = "http://127.0.0.1:8732";

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (element === null) {
    throw new Error(`missing page element #${id}`);
  }
  return element as T;
}

function serviceUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("service");
  return fromQuery ?? DEFAULT_SERVICE;
}

function main(): void {
  const svg = byId<HTMLElement>("canvas") as unknown as SVGSVGElement;
  const statusBar = byId<HTMLElement>("status");
  const banner = byId<HTMLElement>("banner");
  const urlInput = byId<HTMLInputElement>("service-url");
  const fileInput = byId<HTMLInputElement>("file-input");

  urlInput.value = serviceUrl();
  const doc = new EditorDocument(new ServiceClient(urlInput.value));
  urlInput.addEventListener("change", () => {
    doc.setClient(urlInput.value.trim() === "" ? null : new ServiceClient(urlInput.value.trim()));
    doc.announce(`service: ${urlInput.value.trim() || "none"}`);
  });

  // ------------------------------------------------------------------
  // repaint

  const viewBox = () => {
    const width = svg.clientWidth || 800;
    const height = svg.clientHeight || 600;
    return rect(doc.viewport.panX, doc.viewport.panY, width / doc.viewport.zoom, height / doc.viewport.zoom);
  };

  const layoutButton = byId<HTMLButtonElement>("btn-layout");
  const repaint = () => {
    renderCanvas(svg, doc.model, { viewBox: viewBox(), selection: doc.selection });
    statusBar.textContent = doc.status;
    layoutButton.disabled = doc.layoutInFlight;
    if (doc.banner === null) {
      banner.hidden = true;
      banner.textContent = "";
    } else {
      banner.hidden = false;
      banner.textContent = doc.banner
        .map((v) => `${v.rule}${v.object !== null ? ` (object ${v.object})` : ""}: ${v.message}`)
        .join("\n");
    }
    syncInspector();
  };
  doc.onChange(repaint);
  attachCanvasInteractions(doc, svg);

  // ------------------------------------------------------------------
  // file open / save

  byId<HTMLButtonElement>("btn-open").addEventListener("click", () => fileInput.click());
  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    if (file === undefined) {
      return;
    }
    await doc.open(await file.text());
    fileInput.value = "";
  });

  byId<HTMLButtonElement>("btn-save").addEventListener("click", () => {
    let text: string;
    try {
      text = doc.save();
    } catch (exc) {
      doc.announce(`save failed: ${exc instanceof Error ? exc.message : String(exc)}`);
      return;
    }
    const blob = new Blob([text], { type: "application/xml" });
    const anchor = document.createElement("a");
    anchor.href = URL.createObjectURL(blob);
    anchor.download = "document.graphml";
    anchor.click();
    URL.revokeObjectURL(anchor.href);
    doc.announce("document saved");
  });

  // ------------------------------------------------------------------
  // toolbar edit actions

  byId<HTMLButtonElement>("btn-add-node").addEventListener("click", () => {
    const box = viewBox();
    doc.addNode(box.x + box.w / 2 - 20, box.y + box.h / 2 - 20);
  });
  byId<HTMLButtonElement>("btn-connect").addEventListener("click", () => doc.connectSelection());
  byId<HTMLButtonElement>("btn-group").addEventListener("click", () => doc.groupSelection());
  byId<HTMLButtonElement>("btn-delete").addEventListener("click", () => doc.deleteSelection());
  byId<HTMLButtonElement>("btn-highlight").addEventListener("click", () => doc.highlightSelection());
  byId<HTMLButtonElement>("btn-revert").addEventListener("click", () => doc.revertLayout());
  byId<HTMLButtonElement>("btn-zoom-in").addEventListener("click", () => doc.zoomBy(1.25));
  byId<HTMLButtonElement>("btn-zoom-out").addEventListener("click", () => doc.zoomBy(1 / 1.25));

  svg.addEventListener("dblclick", (event) => {
    const frame = svg.getBoundingClientRect();
    const [wx, wy] = screenToWorld(doc.viewport, event.clientX - frame.left, event.clientY - frame.top);
    doc.addNode(wx - 20, wy - 20);
  });

  // ------------------------------------------------------------------
  // property inspector

  const inspLabel = byId<HTMLInputElement>("insp-label");
  const inspFill = byId<HTMLInputElement>("insp-fill");
  const inspBorder = byId<HTMLInputElement>("insp-border");
  const inspLine = byId<HTMLSelectElement>("insp-line");
  const inspArrow = byId<HTMLSelectElement>("insp-arrow");
  const inspShape = byId<HTMLSelectElement>("insp-shape");
  const inspWidth = byId<HTMLInputElement>("insp-width");
  const inspW = byId<HTMLInputElement>("insp-w");
  const inspH = byId<HTMLInputElement>("insp-h");

  const fillSelect = (select: HTMLSelectElement, values: readonly string[]) => {
    for (const value of values) {
      const option = document.createElement("option");
      option.value = value;
      option.textContent = value;
      select.appendChild(option);
    }
  };
  fillSelect(inspLine, LINE_STYLES);
  fillSelect(inspArrow, ARROW_STYLES);
  fillSelect(inspShape, NODE_SHAPES);

  function syncInspector(): void {
    if (doc.selection.size !== 1) {
      return;
    }
    const [objectId] = doc.selection;
    const node = doc.model.nodes.get(objectId);
    const edge = doc.model.edges.get(objectId);
    const target = node ?? edge;
    if (target === undefined) {
      return;
    }
    inspLabel.value = target.label;
    inspFill.value = node?.style.fillColor ?? "#ffffff";
    inspBorder.value = target.style.borderColor;
    inspLine.value = target.style.lineStyle;
    inspArrow.value = edge?.style.arrow ?? "none";
    inspShape.value = node?.shape ?? "rectangle";
    inspWidth.value = String(target.style.width);
    if (node !== undefined) {
      inspW.value = String(node.bounds.w);
      inspH.value = String(node.bounds.h);
    }
  }

  byId<HTMLButtonElement>("insp-apply").addEventListener("click", () => {
    if (doc.selection.size === 1) {
      doc.setLabel(inspLabel.value);
    }
    doc.setStyle({
      fillColor: inspFill.value,
      borderColor: inspBorder.value,
      lineStyle: inspLine.value as LineStyle,
      arrow: inspArrow.value as ArrowStyle,
      shape: inspShape.value as NodeShape,
      width: Number(inspWidth.value),
    });
  });
  byId<HTMLButtonElement>("insp-resize").addEventListener("click", () => {
    doc.resizeSelection(Number(inspW.value), Number(inspH.value));
  });

  // ------------------------------------------------------------------
  // layout dialog

  const dialog = byId<HTMLDialogElement>("layout-dialog");
  const algoSelect = byId<HTMLSelectElement>("layout-algorithm");
  const seedInput = byId<HTMLInputElement>("layout-seed");
  const optionsArea = byId<HTMLElement>("layout-options");
  let algorithms: AlgorithmInfo[] = [];

  const renderOptionFields = () => {
    optionsArea.textContent = "";
    const info = algorithms.find((a) => a.name === algoSelect.value);
    if (info === undefined) {
      return;
    }
    for (const option of info.options) {
      const row = document.createElement("label");
      row.className = "option-row";
      const caption = document.createElement("span");
      caption.textContent = option.name;
      caption.title = option.description;
      const field = document.createElement("input");
      field.type = "number";
      field.step = option.type === "integer" ? "1" : "any";
      field.value = String(option.default);
      field.dataset.option = option.name;
      row.appendChild(caption);
      row.appendChild(field);
      optionsArea.appendChild(row);
    }
  };
  algoSelect.addEventListener("change", renderOptionFields);

  byId<HTMLButtonElement>("btn-layout").addEventListener("click", async () => {
    try {
      algorithms = await new ServiceClient(urlInput.value).algorithms();
    } catch (exc) {
      doc.announce(`cannot list algorithms: ${exc instanceof Error ? exc.message : String(exc)}`);
      return;
    }
    algoSelect.textContent = "";
    for (const info of algorithms) {
      const option = document.createElement("option");
      option.value = info.name;
      option.textContent = `${info.name} — ${info.description}`;
      algoSelect.appendChild(option);
    }
    renderOptionFields();
    if (typeof dialog.showModal === "function") {
      dialog.showModal();
    } else {
      dialog.setAttribute("open", "");
    }
  });

  const closeDialog = () => {
    if (typeof dialog.close === "function") {
      dialog.close();
    } else {
      dialog.removeAttribute("open");
    }
  };

  // Cancel closes the dialog without any request leaving the page.
  byId<HTMLButtonElement>("layout-cancel").addEventListener("click", closeDialog);

  byId<HTMLButtonElement>("layout-run").addEventListener("click", async () => {
    const algorithm = algoSelect.value;
    const seed = Math.max(0, Math.trunc(Number(seedInput.value) || 0));
    const options: Record<string, number> = {};
    for (const field of optionsArea.querySelectorAll<HTMLInputElement>("input[data-option]")) {
      const value = Number(field.value);
      if (Number.isFinite(value)) {
        options[field.dataset.option!] = value;
      }
    }
    closeDialog();
    const run = await doc.runLayout(algorithm, { seed, options });
    if (run !== null) {
      animate(run);
    }
  });

  // The document already holds the final geometry; the tween replays the
  // transition for the eye and lands exactly on the adopted values.
  const animate = (run: LayoutRun) => {
    const start = performance.now();
    const step = (now: number) => {
      const t = Math.min((now - start) / TWEEN_MS, 1);
      lerpBounds(doc.model, run.from, run.to, t);
      repaint();
      if (t < 1) {
        requestAnimationFrame(step);
      }
    };
    lerpBounds(doc.model, run.from, run.to, 0);
    repaint();
    requestAnimationFrame(step);
  };

  repaint();
  doc.announce("ready");
}

main();
