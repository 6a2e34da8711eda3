/**
 * Knowledge-tree view: collapsible hierarchy with count badges and
 * clickable leaf members.
 */

import type { TreeNode } from "./api.js";
import { clear, el } from "./dom.js";
import type { Axis } from "./state.js";

export interface TreeCallbacks {
  onAxisChange(axis: Axis): void;
  onMemberClick(id: string): void;
}

export class TreeView {
  private collapsed = new Set<string>();

  constructor(
    private readonly container: HTMLElement,
    private readonly callbacks: TreeCallbacks,
  ) {}

  render(axis: Axis, root: TreeNode | null): void {
    clear(this.container);
    const toolbar = el("div", { class: "toolbar" });
    for (const choice of ["temporal", "spatial"] as Axis[]) {
      const button = el(
        "button",
        { class: axis === choice ? "axis-toggle active" : "axis-toggle", "data-axis": choice },
        choice,
      );
      button.addEventListener("click", () => this.callbacks.onAxisChange(choice));
      toolbar.append(button);
    }
    this.container.append(toolbar);
    if (!root) {
      this.container.append(el("p", { class: "empty-note" }, "no tree loaded"));
      return;
    }
    this.container.append(this.renderNode(root, [root.key]));
  }

  private renderNode(node: TreeNode, path: string[]): HTMLElement {
    const key = path.join("/");
    const item = el("div", { class: `tree-node level-${node.level}`, "data-key": node.key });
    const hasContent = node.children.length > 0 || node.members.length > 0;
    const caret = el(
      "span",
      { class: "caret" },
      hasContent ? (this.collapsed.has(key) ? "▸" : "▾") : "•",
    );
    const label = el(
      "span",
      { class: "tree-label" },
      `${node.key} `,
      el("span", { class: "badge" }, String(node.count)),
    );
    const head = el("div", { class: "tree-head" }, caret, label);
    if (hasContent) {
      head.addEventListener("click", () => {
        if (this.collapsed.has(key)) this.collapsed.delete(key);
        else this.collapsed.add(key);
        const body = item.querySelector(":scope > .tree-body");
        if (body) body.classList.toggle("hidden", this.collapsed.has(key));
        caret.textContent = this.collapsed.has(key) ? "▸" : "▾";
      });
    }
    item.append(head);

    const body = el("div", { class: this.collapsed.has(key) ? "tree-body hidden" : "tree-body" });
    for (const child of node.children) {
      body.append(this.renderNode(child, [...path, child.key]));
    }
    for (const member of node.members) {
      const leaf = el("a", { class: "tree-member", href: "#" }, member);
      leaf.addEventListener("click", (event) => {
        event.preventDefault();
        this.callbacks.onMemberClick(member);
      });
      body.append(leaf);
    }
    item.append(body);
    return item;
  }
}
