/** Tiny DOM construction helper; the app has no framework dependency. */

type Child = Node | string | null | undefined;

type Attrs = Record<string, string | number | boolean | EventListener>;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Attrs = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [name, value] of Object.entries(attrs)) {
    if (typeof value === "function") {
      node.addEventListener(name.replace(/^on/, ""), value);
    } else if (typeof value === "boolean") {
      if (value) node.setAttribute(name, "");
    } else {
      node.setAttribute(name, String(value));
    }
  }
  for (const child of children) {
    if (child === null || child === undefined) continue;
    node.append(child);
  }
  return node;
}

/** Replace `host`'s content with the component output on every store event. */
export function mount(
  host: HTMLElement,
  render: () => HTMLElement,
  subscribe: (listener: () => void) => () => void,
): () => void {
  const draw = () => {
    host.replaceChildren(render());
  };
  draw();
  const unsubscribe = subscribe(draw);
  return unsubscribe;
}
